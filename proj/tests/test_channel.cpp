// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "catch_amalgamated.hpp"

#include "cogmimo/channel.hpp"
#include "cogmimo/linalg.hpp"
#include "cogmimo/lowsnr.hpp"
#include "cogmimo/stats.hpp"

#include <random>
#include <sstream>

using namespace cogmimo;
using Catch::Approx;

namespace {

CMatrix random_matrix(int rows, int cols, std::mt19937_64& rng)
{
    return draw_rayleigh(cols, rows, rng).h;
}

CMatrix random_trace_one_psd(int n, std::mt19937_64& rng)
{
    const CMatrix g = random_matrix(n, n, rng);
    CMatrix k = g * g.adjoint();
    return k / k.trace().real();
}

} // namespace

TEST_CASE("rayleigh entries have unit variance")
{
    const auto samples = sample_rayleigh(3, 3, 100000, 5);
    double acc = 0;
    for (const auto& s : samples)
        acc += s.h.squaredNorm();
    CHECK(acc / (9.0 * samples.size()) == Approx(1).margin(0.02));
}

TEST_CASE("ensembles are deterministic and independent of worker count")
{
    const auto a = sample_rayleigh(2, 3, 500, 42, 1);
    const auto b = sample_rayleigh(2, 3, 500, 42, 4);
    const auto c = sample_rayleigh(2, 3, 500, 43, 1);
    REQUIRE(a.size() == 500);
    bool all_equal = true, any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        all_equal = all_equal && a[i].h == b[i].h;
        any_diff = any_diff || a[i].h != c[i].h;
    }
    CHECK(all_equal);
    CHECK(any_diff);
    CHECK(a[0].rx() == 3);
    CHECK(a[0].tx() == 2);
}

TEST_CASE("mean trace of the Gram matrix")
{
    const auto samples = sample_rayleigh(3, 3, 100000, 6);
    const auto est = estimate_trace_moments(samples);
    CHECK(est.mean.trace == Approx(9).margin(0.1));
}

TEST_CASE("noise covariance examples")
{
    const auto kz = build_kz(CMatrix::Identity(3, 3) / 3.0, 1, 1);
    CHECK((kz.k_z() - 2 * CMatrix::Identity(3, 3)).norm() < 1e-12);
    CHECK((kz.k_z_inv() - 0.5 * CMatrix::Identity(3, 3)).norm() < 1e-12);
    const auto none = build_kz(CMatrix::Identity(2, 2) / 2.0, 0, 1);
    CHECK((none.k_z() - CMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK_THROWS_AS(build_kz(CMatrix::Identity(2, 2), 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_kz(CMatrix::Identity(2, 2) / 2.0, 1, 0), std::invalid_argument);
}

TEST_CASE("property: noise covariance is Hermitian PD with bounded inverse spectrum")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + trial % 4;
        const double ss2 = 3 * u(rng), sn2 = 0.1 + 3 * u(rng);
        const auto kz = build_kz(random_trace_one_psd(n, rng), ss2, sn2);
        CHECK(is_hermitian(kz.k_z()));
        CHECK((kz.k_z() * kz.k_z_inv() - CMatrix::Identity(n, n)).norm() < 1e-8);
        const auto eig = hermitian_eigenvalues(kz.k_z_inv());
        const double lo = sn2 / (n * (sn2 + ss2));
        CHECK(eig(0) <= 1 + 1e-12);
        CHECK(eig(n - 1) >= lo * (1 - 1e-12));
    }
}

TEST_CASE("hermitian eigen decomposition")
{
    const auto id = hermitian_eig(CMatrix::Identity(3, 3));
    CHECK((id.values.array() - 1).abs().maxCoeff() < 1e-14);

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = 1;
    const auto dm = hermitian_eig(d);
    CHECK(dm.values(0) == Approx(3));
    CHECK(dm.values(1) == Approx(1));
    CHECK(std::abs(dm.vectors(0, 0)) == Approx(1));
    CHECK(std::abs(dm.vectors(1, 1)) == Approx(1));

    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        const CMatrix g = random_matrix(4, 4, rng);
        const CMatrix h = g + g.adjoint();
        const auto e = hermitian_eig(h);
        const CMatrix rebuilt = spectral_map(e, [](double x) { return x; });
        CHECK((rebuilt - h).norm() < 1e-8);
        for (int i = 1; i < 4; ++i)
            CHECK(e.values(i - 1) >= e.values(i));
    }
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 1) = 1;
    CHECK_THROWS_AS(hermitian_eig(bad), std::invalid_argument);
}

TEST_CASE("whitening")
{
    std::mt19937_64 rng(9);
    const ChannelSample h = draw_rayleigh(2, 3, rng);
    CHECK((whiten(h, NoiseCovariance::from_matrix(CMatrix::Identity(3, 3))) - h.h).norm() < 1e-14);
    CHECK((whiten(h, NoiseCovariance::from_matrix(4 * CMatrix::Identity(3, 3))) - h.h / 2.0).norm() <
          1e-14);
    for (int t = 0; t < 100; ++t) {
        const ChannelSample s = draw_rayleigh(3, 3, rng);
        const auto kz = build_kz(random_trace_one_psd(3, rng), 1.5, 0.7);
        const CMatrix w = whiten(s, kz);
        CHECK((w.adjoint() * w - s.h.adjoint() * kz.k_z_inv() * s.h).norm() < 1e-10);
    }
}

TEST_CASE("property: Ostrowski chain on the top eigenvalue")
{
    std::mt19937_64 rng(10);
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + t % 4, m = 1 + (t / 4) % 4;
        const ChannelSample s = draw_rayleigh(m, n, rng);
        const auto kz = build_kz(random_trace_one_psd(n, rng), 1, 1);
        const double busy = hermitian_eigenvalues(CMatrix(s.h.adjoint() * kz.k_z_inv() * s.h))(0);
        const double idle = hermitian_eigenvalues(CMatrix(s.h.adjoint() * s.h))(0);
        const double kzi = hermitian_eigenvalues(kz.k_z_inv())(0);
        CHECK(busy <= kzi * idle * (1 + 1e-10) + 1e-14);
        CHECK(kzi * idle <= idle * (1 + 1e-12));
    }
}

TEST_CASE("input covariance validation")
{
    CHECK((InputCovariance::uniform(4).matrix() - CMatrix::Identity(4, 4) / 4.0).norm() < 1e-15);
    CHECK_THROWS_AS(InputCovariance(CMatrix::Identity(2, 2)), std::invalid_argument);
    CMatrix neg = CMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(InputCovariance(neg), std::invalid_argument);
}

TEST_CASE("ensemble CSV round trip")
{
    const auto samples = sample_rayleigh(2, 3, 20, 3);
    std::stringstream buf;
    write_ensemble_csv(buf, samples);
    const auto back = read_ensemble_csv(buf, 2, 3);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        CHECK(back[i].h == samples[i].h);
}

TEST_CASE("pairwise summation is exact on representable sums")
{
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == Approx(100).epsilon(1e-14));
    const auto est = mean_with_stderr(std::vector<double>{1, 2, 3, 4});
    CHECK(est.mean == 2.5);
    CHECK(est.std_error == Approx(std::sqrt(5.0 / 3 / 4)));
}
