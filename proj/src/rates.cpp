// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cogmimo/rates.hpp"
#include "cogmimo/stats.hpp"

#include <algorithm>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cogmimo {

namespace {

double log2_det_general(const CMatrix& a)
{
    Eigen::PartialPivLU<CMatrix> lu(a);
    const auto& u = lu.matrixLU();
    double acc = 0;
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        acc += std::log2(std::abs(u(i, i)));
    return acc;
}

double rate_impl(const ChannelSample& h, const InputCovariance& k_x, double weight,
                 double bandwidth, const CMatrix* kz_inv)
{
    if (k_x.dim() != h.tx())
        throw std::invalid_argument("log_det_rate: covariance does not match tx antennas");
    if (!(weight >= 0))
        throw std::invalid_argument("log_det_rate: weight must be non-negative");
    if (weight == 0)
        return 0.0;
    const auto n = h.h.rows();
    CMatrix a = weight * h.h * k_x.matrix() * h.h.adjoint();
    if (kz_inv) {
        if (kz_inv->rows() != n || kz_inv->cols() != n)
            throw std::invalid_argument("log_det_rate: kz_inv does not match rx antennas");
        a = a * (*kz_inv);
    }
    a += CMatrix::Identity(n, n);
    return bandwidth * log2_det_general(a);
}

CMatrix gram(const ChannelSample& h, const CMatrix* kz_inv)
{
    if (kz_inv)
        return h.h.adjoint() * (*kz_inv) * h.h;
    return h.h.adjoint() * h.h;
}

HermitianEigen<std::complex<double>> clipped_eig(const CMatrix& g)
{
    auto eig = hermitian_eig(g);
    const double top = eig.values.size() ? eig.values(0) : 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        if (top <= 0 || eig.values(i) < kZeroModeTol * top)
            eig.values(i) = 0;
    return eig;
}

InputCovariance covariance_on(const HermitianEigen<std::complex<double>>& eig,
                              std::span<const double> power)
{
    const auto m = eig.vectors.rows();
    CMatrix k_x = CMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        if (power[i] > 0)
            k_x += power[i] * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    return InputCovariance((k_x + k_x.adjoint()) / 2.0);
}

InputCovariance capacity_impl(const ChannelSample& h, double weight, const CMatrix* kz_inv)
{
    if (!(weight >= 0))
        throw std::invalid_argument("capacity_covariance: weight must be non-negative");
    const auto eig = clipped_eig(gram(h, kz_inv));
    std::vector<double> values(eig.values.data(), eig.values.data() + eig.values.size());
    std::vector<double> power;
    if (weight == 0) {
        // limit of the water-filling solution as weight -> 0+
        const auto top = top_eigen(values);
        power.assign(values.size(), 0.0);
        for (int i = 0; i < top.multiplicity; ++i)
            power[i] = 1.0 / top.multiplicity;
    } else {
        std::vector<double> gains(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            gains[i] = weight * values[i];
        power = waterfill(gains, 1.0);
    }
    return covariance_on(eig, power);
}

InputCovariance beamforming_impl(const ChannelSample& h, const CMatrix* kz_inv)
{
    const auto eig = clipped_eig(gram(h, kz_inv));
    std::vector<double> values(eig.values.data(), eig.values.data() + eig.values.size());
    const auto top = top_eigen(values);
    std::vector<double> power(values.size(), 0.0);
    for (int i = 0; i < top.multiplicity; ++i)
        power[i] = 1.0 / top.multiplicity;
    return covariance_on(eig, power);
}

double log1p_checked(double x)
{
    if (!(x > -1.0))
        throw std::domain_error("spectral_rate: weight too negative for this spectrum");
    return std::log1p(x);
}

} // namespace

std::string_view to_string(CovarianceMode mode)
{
    switch (mode) {
    case CovarianceMode::uniform: return "uniform";
    case CovarianceMode::waterfill: return "waterfill";
    case CovarianceMode::beamform: return "beamform";
    }
    return "uniform";
}

CovarianceMode parse_covariance_mode(std::string_view name)
{
    if (name == "uniform")
        return CovarianceMode::uniform;
    if (name == "waterfill")
        return CovarianceMode::waterfill;
    if (name == "beamform")
        return CovarianceMode::beamform;
    throw std::invalid_argument("unknown covariance mode: " + std::string(name));
}

double log_det_rate(const ChannelSample& h, const InputCovariance& k_x, double weight,
                    double bandwidth)
{
    return rate_impl(h, k_x, weight, bandwidth, nullptr);
}

double log_det_rate(const ChannelSample& h, const InputCovariance& k_x, double weight,
                    double bandwidth, const CMatrix& kz_inv)
{
    return rate_impl(h, k_x, weight, bandwidth, &kz_inv);
}

std::vector<double> waterfill(std::span<const double> gains, double total)
{
    if (gains.empty())
        throw std::invalid_argument("waterfill: empty gain list");
    if (!(total > 0))
        throw std::invalid_argument("waterfill: total power must be positive");
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (gains[i] < 0 || !std::isfinite(gains[i]))
            throw std::invalid_argument("waterfill: gains must be finite and non-negative");
        if (gains[i] > 0)
            order.push_back(i);
    }
    std::vector<double> power(gains.size(), 0.0);
    if (order.empty()) {
        std::fill(power.begin(), power.end(), total / static_cast<double>(gains.size()));
        return power;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return gains[x] > gains[y]; });

    // largest active set whose water level clears its weakest mode
    double inv_sum = 0;
    std::vector<double> prefix(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        inv_sum += 1.0 / gains[order[k]];
        prefix[k] = inv_sum;
    }
    for (std::size_t k = order.size(); k >= 1; --k) {
        const double level = (total + prefix[k - 1]) / static_cast<double>(k);
        if (level > 1.0 / gains[order[k - 1]] || k == 1) {
            for (std::size_t i = 0; i < k; ++i)
                power[order[i]] = std::max(0.0, level - 1.0 / gains[order[i]]);
            break;
        }
    }
    return power;
}

InputCovariance capacity_covariance(const ChannelSample& h, double weight)
{
    return capacity_impl(h, weight, nullptr);
}

InputCovariance capacity_covariance(const ChannelSample& h, double weight, const CMatrix& kz_inv)
{
    return capacity_impl(h, weight, &kz_inv);
}

InputCovariance beamforming_covariance(const ChannelSample& h)
{
    return beamforming_impl(h, nullptr);
}

InputCovariance beamforming_covariance(const ChannelSample& h, const CMatrix& kz_inv)
{
    return beamforming_impl(h, &kz_inv);
}

TopEigen top_eigen(std::span<const double> descending)
{
    if (descending.empty())
        throw std::invalid_argument("top_eigen: empty spectrum");
    TopEigen out{descending[0], 0};
    const double floor = out.value - kTieTol * std::abs(out.value);
    for (double v : descending) {
        if (v < floor)
            break;
        ++out.multiplicity;
    }
    return out;
}

std::vector<double> gram_spectrum(const CMatrix& gram_matrix)
{
    const auto values = hermitian_eigenvalues(gram_matrix);
    std::vector<double> out(values.data(), values.data() + values.size());
    const double top = out.empty() ? 0.0 : out[0];
    for (double& v : out)
        if (top <= 0 || v < kZeroModeTol * top)
            v = 0;
    return out;
}

double spectral_rate(std::span<const double> eigenvalues, double weight, CovarianceMode mode,
                     double bandwidth)
{
    if (eigenvalues.empty())
        throw std::invalid_argument("spectral_rate: empty spectrum");
    double acc = 0;
    switch (mode) {
    case CovarianceMode::uniform: {
        const double share = weight / static_cast<double>(eigenvalues.size());
        for (double v : eigenvalues)
            if (v > 0)
                acc += log1p_checked(share * v);
        break;
    }
    case CovarianceMode::beamform: {
        const auto top = top_eigen(eigenvalues);
        const double share = weight / top.multiplicity;
        for (int i = 0; i < top.multiplicity; ++i)
            if (eigenvalues[i] > 0)
                acc += log1p_checked(share * eigenvalues[i]);
        break;
    }
    case CovarianceMode::waterfill: {
        if (!(weight >= 0))
            throw std::invalid_argument("spectral_rate: water-filling needs a non-negative weight");
        if (weight == 0)
            return 0.0;
        std::vector<double> gains(eigenvalues.size());
        for (std::size_t i = 0; i < gains.size(); ++i)
            gains[i] = weight * eigenvalues[i];
        const auto power = waterfill(gains, 1.0);
        for (std::size_t i = 0; i < gains.size(); ++i)
            acc += std::log1p(gains[i] * power[i]);
        break;
    }
    }
    return bandwidth * acc / std::numbers::ln2;
}

ScenarioRates scenario_rates(const ChannelSample& h, const NoiseCovariance& kz,
                             const PowerPolicy& policy, const SystemConfig& config,
                             CovarianceMode mode)
{
    if (h.rx() != config.rx_antennas() || h.tx() != config.tx_antennas() || kz.dim() != h.rx())
        throw std::invalid_argument("scenario_rates: dimensions disagree with the configuration");
    const double w_idle = config.rx_antennas() * snr_of(policy.p2(), config);
    const double w_busy = policy.mu() * w_idle;
    const CMatrix w = whiten(h, kz);
    const auto busy = gram_spectrum(w.adjoint() * w);
    const auto idle = gram_spectrum(h.h.adjoint() * h.h);
    const double bw = config.bandwidth();

    ScenarioRates out;
    out.c[0] = spectral_rate(busy, w_busy, mode, bw);
    out.c[1] = spectral_rate(busy, w_idle, mode, bw);
    out.c[2] = spectral_rate(idle, w_busy, mode, bw);
    out.c[3] = spectral_rate(idle, w_idle, mode, bw);
    out.r1 = out.c[0];
    out.r2 = out.c[3];
    return out;
}

SpectralEnsemble::SpectralEnsemble(std::span<const ChannelSample> samples,
                                   const NoiseCovariance& kz, unsigned workers)
{
    if (samples.empty())
        throw std::invalid_argument("SpectralEnsemble: empty ensemble");
    count_ = samples.size();
    m_ = samples[0].tx();
    n_ = samples[0].rx();
    if (kz.dim() != n_)
        throw std::invalid_argument("SpectralEnsemble: noise covariance does not match rx antennas");
    for (const auto& h : samples)
        if (h.tx() != m_ || h.rx() != n_)
            throw std::invalid_argument("SpectralEnsemble: samples must share dimensions");
    busy_.resize(count_ * m_);
    idle_.resize(count_ * m_);
    parallel_for(count_, workers, [&](std::size_t i) {
        const auto& h = samples[i];
        const CMatrix w = kz.k_z_inv_sqrt() * h.h;
        const auto b = gram_spectrum(w.adjoint() * w);
        const auto d = gram_spectrum(h.h.adjoint() * h.h);
        std::copy(b.begin(), b.end(), busy_.begin() + i * m_);
        std::copy(d.begin(), d.end(), idle_.begin() + i * m_);
    });
}

} // namespace cogmimo
