// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cogmimo/channel.hpp"
#include "cogmimo/stats.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace cogmimo {

namespace {

constexpr double kTraceTol = 1e-9;
constexpr double kPsdTol = 1e-12;

void check_trace_one_psd(const CMatrix& a, double trace_tol, const char* what)
{
    if (!is_hermitian(a))
        throw std::invalid_argument(std::string(what) + " is not Hermitian");
    const double tr = a.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw std::invalid_argument(std::string(what) + " must have unit trace");
    const auto eig = hermitian_eigenvalues(a);
    if (eig.size() > 0 && eig(eig.size() - 1) < -kPsdTol)
        throw std::invalid_argument(std::string(what) + " is not positive semidefinite");
}

void put_double(std::ostream& out, double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

} // namespace

NoiseCovariance::NoiseCovariance(const CMatrix& k_z)
{
    const auto eig = hermitian_eig(k_z);
    if (eig.values.size() == 0 || eig.values(eig.values.size() - 1) <= 0)
        throw std::invalid_argument("noise covariance must be positive definite");
    k_z_ = (k_z + k_z.adjoint()) / 2.0;
    k_z_inv_ = spectral_map(eig, [](double x) { return 1.0 / x; });
    k_z_inv_sqrt_ = spectral_map(eig, [](double x) { return 1.0 / std::sqrt(x); });
}

NoiseCovariance NoiseCovariance::from_interference(const CMatrix& k_s, double sigma_s2,
                                                   double sigma_n2)
{
    if (!(sigma_n2 > 0) || !(sigma_s2 >= 0))
        throw std::invalid_argument("noise variance must be positive and interference variance non-negative");
    if (k_s.rows() != k_s.cols() || k_s.rows() == 0)
        throw std::invalid_argument("k_s must be square and non-empty");
    check_trace_one_psd(k_s, kTraceTol, "k_s");
    const auto n = k_s.rows();
    const CMatrix kz = (static_cast<double>(n) * sigma_s2 * k_s +
                        sigma_n2 * CMatrix::Identity(n, n)) / sigma_n2;
    return NoiseCovariance(kz);
}

NoiseCovariance NoiseCovariance::from_matrix(const CMatrix& k_z) { return NoiseCovariance(k_z); }

NoiseCovariance build_kz(const CMatrix& k_s, double sigma_s2, double sigma_n2)
{
    return NoiseCovariance::from_interference(k_s, sigma_s2, sigma_n2);
}

NoiseCovariance default_noise_covariance(const SystemConfig& config)
{
    const int n = config.rx_antennas();
    const CMatrix k_s = CMatrix::Identity(n, n) / static_cast<double>(n);
    return build_kz(k_s, config.interference_variance(), config.noise_variance());
}

InputCovariance::InputCovariance(CMatrix k_x) : k_x_(std::move(k_x))
{
    if (k_x_.rows() != k_x_.cols() || k_x_.rows() == 0)
        throw std::invalid_argument("input covariance must be square and non-empty");
    check_trace_one_psd(k_x_, 1e-12, "input covariance");
}

InputCovariance InputCovariance::uniform(int m)
{
    return InputCovariance(CMatrix::Identity(m, m) / static_cast<double>(m));
}

std::vector<ChannelSample> sample_rayleigh(int m, int n, std::size_t count, std::uint64_t seed,
                                           unsigned workers)
{
    if (m < 1 || n < 1)
        throw std::invalid_argument("antenna counts must be positive");
    std::vector<ChannelSample> out(count);
    parallel_for(count, workers, [&](std::size_t i) {
        auto rng = stream_rng(seed, i);
        out[i] = draw_rayleigh(m, n, rng);
    });
    return out;
}

CMatrix whiten(const ChannelSample& h, const NoiseCovariance& kz)
{
    if (kz.dim() != h.rx())
        throw std::invalid_argument("whiten: dimension mismatch");
    return kz.k_z_inv_sqrt() * h.h;
}

void write_ensemble_csv(std::ostream& out, std::span<const ChannelSample> samples)
{
    if (samples.empty())
        return;
    const int n = samples[0].rx();
    const int m = samples[0].tx();
    out << "index";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            out << ",h" << i << j << "_re,h" << i << j << "_im";
    out << '\n';
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& h = samples[k].h;
        if (h.rows() != n || h.cols() != m)
            throw std::invalid_argument("ensemble samples must share dimensions");
        out << k;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                out << ',';
                put_double(out, h(i, j).real());
                out << ',';
                put_double(out, h(i, j).imag());
            }
        out << '\n';
    }
}

std::vector<ChannelSample> read_ensemble_csv(std::istream& in, int m, int n)
{
    std::vector<ChannelSample> out;
    std::string line;
    if (!std::getline(in, line))
        return out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        ChannelSample s{CMatrix(n, m)};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                double re = 0, im = 0;
                if (!std::getline(row, cell, ','))
                    throw std::runtime_error("ensemble csv: short row");
                re = std::stod(cell);
                if (!std::getline(row, cell, ','))
                    throw std::runtime_error("ensemble csv: short row");
                im = std::stod(cell);
                s.h(i, j) = {re, im};
            }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace cogmimo
