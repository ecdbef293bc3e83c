// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "catch_amalgamated.hpp"

#include "cogmimo/channel.hpp"
#include "cogmimo/effcap.hpp"
#include "cogmimo/linalg.hpp"
#include "cogmimo/rayleigh.hpp"
#include "cogmimo/stats.hpp"

#include <cmath>
#include <random>

using namespace cogmimo;
using Catch::Approx;

namespace {

HankelSpec spec_of(int k, int d, double exponent, double snr_arg, double ratio = 1)
{
    HankelSpec s;
    s.k = k;
    s.d = d;
    s.exponent = exponent;
    s.snr_arg = snr_arg;
    s.antenna_ratio = ratio;
    return s;
}

} // namespace

TEST_CASE("gauss-laguerre rules integrate polynomials exactly")
{
    for (int order : {32, 64, 128}) {
        const auto& rule = gauss_laguerre(order);
        CHECK(rule.weights.sum() == Approx(1).epsilon(1e-12));
        CHECK(rule.weights.dot(rule.nodes) == Approx(1).epsilon(1e-12));
        CHECK(rule.weights.dot(rule.nodes.array().pow(5).matrix()) == Approx(120).epsilon(1e-10));
    }
    CHECK(&gauss_laguerre(64) == &gauss_laguerre(64));
    CHECK_THROWS_AS(gauss_laguerre(0), std::invalid_argument);
}

TEST_CASE("hankel entries reduce to factorials without the rate factor")
{
    CHECK(hankel_entry(spec_of(1, 0, 0, 3), 1, 1) == 1);
    CHECK(hankel_entry(spec_of(3, 2, 0, 1), 3, 2) == Approx(24 * 5 * 1.0 * 1));
    CHECK(hankel_entry(spec_of(3, 2, 0, 1), 3, 2) == Approx(std::tgamma(3 + 2 + 2 - 1)));
    CHECK(hankel_entry(spec_of(2, 1, 5, 0), 2, 2) == Approx(std::tgamma(2 + 2 + 1 - 1)));
}

TEST_CASE("hankel entry exponential-integral oracle")
{
    const double oracle = -std::exp(1.0) * std::expint(-1.0);
    CHECK(oracle == Approx(0.596347362323194).epsilon(1e-14));
    CHECK(hankel_entry(spec_of(1, 0, 1, 1), 1, 1) == Approx(oracle).epsilon(1e-10));
}

TEST_CASE("hankel matrix structure and index checks")
{
    const auto spec = spec_of(4, 1, 0.7, 2.5, 0.8);
    const auto g = hankel_matrix(spec);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(g(i, j) == g(j, i));
            if (i + 1 < 4 && j > 0)
                CHECK(g(i, j) == g(i + 1, j - 1));
        }
    CHECK_THROWS_AS(hankel_entry(spec, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(hankel_entry(spec, 5, 1), std::invalid_argument);
}

TEST_CASE("property: MGF lies in the unit interval")
{
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 200; ++t) {
        const int m = 1 + t % 4, n = 1 + (t / 4) % 4;
        const auto sys = SystemConfig(0.1, 100, 1, 1, m, n, std::pow(10.0, -3 + 3 * u(rng)));
        const double v = rayleigh_mgf(make_hankel_spec(sys, std::pow(10.0, -2 + 3 * u(rng))));
        CHECK(v > 0);
        CHECK(v <= 1);
    }
    CHECK(rayleigh_mgf(spec_of(3, 0, 0, 1)) == Approx(1).epsilon(1e-12));
}

TEST_CASE("MGF matches a Monte Carlo Wishart average")
{
    const int m = 2, n = 3;
    const auto sys = SystemConfig(0.1, 100, 1, 1, m, n, 0.05);
    const double snr = 0.4;
    const auto spec = make_hankel_spec(sys, snr);
    const auto samples = sample_rayleigh(m, n, 100000, 52);
    std::vector<double> vals;
    vals.reserve(samples.size());
    for (const auto& h : samples) {
        const auto lam = hermitian_eigenvalues(CMatrix(h.h.adjoint() * h.h));
        double acc = 0;
        for (int i = 0; i < lam.size(); ++i)
            acc += std::log1p(spec.antenna_ratio * snr * lam(i));
        vals.push_back(std::exp(-spec.exponent * acc));
    }
    const auto est = mean_with_stderr(vals);
    CHECK(std::abs(rayleigh_mgf(spec) - est.mean) <= 3 * est.std_error);
}

TEST_CASE("scalar MGF is the single kernel integral")
{
    const auto spec = spec_of(1, 2, 1.7, 0.9, 3);
    CHECK(rayleigh_mgf(spec) == Approx(hankel_entry(spec, 1, 1) / 2).epsilon(1e-12));
}

TEST_CASE("steep kernels stay finite")
{
    const auto sys = SystemConfig(0.1, 100, 1, 1, 3, 3, 1);
    const double v = rayleigh_mgf(make_hankel_spec(sys, 10));
    CHECK(v > 0);
    CHECK(v < 1e-15);

    // 60-digit reference: adaptive quadrature of the moments and an exact-arithmetic determinant
    CHECK(v == Approx(2.8374943114969720e-19).epsilon(1e-8));
}

TEST_CASE("closed-form effective rate")
{
    const auto sys = default_system();
    const auto policy = PowerPolicy::unconstrained(1, 10);
    CHECK(closed_form_effective_rate(sys, default_sensing(), default_activity(),
                                     PowerPolicy::unconstrained(1, 0)) == Approx(0).margin(1e-15));
    CHECK_THROWS_AS(closed_form_effective_rate(sys, default_sensing(), ActivityModel(0.1, 0.3), policy),
                    std::invalid_argument);
    CHECK_THROWS_AS(closed_form_effective_rate(sys.with_theta(0), default_sensing(), default_activity(),
                                               policy),
                    std::invalid_argument);

    const auto samples = sample_rayleigh(3, 3, 100000, 53);
    const SpectralEnsemble ens(samples, default_noise_covariance(sys), 1);
    const TransitionModel tm(default_activity(), default_sensing());
    const auto est = effective_rate_estimate(ens, policy, sys, tm, CovarianceMode::uniform);
    const double cf = closed_form_effective_rate(sys, default_sensing(), default_activity(), policy);
    CHECK(std::abs(cf - est.value) <= 3 * est.std_error);

    const auto tiny = sys.with_theta(1e-8);
    const double erg = ergodic_capacity(ens, policy, tiny, tm, CovarianceMode::uniform);
    CHECK(closed_form_effective_rate(tiny, default_sensing(), default_activity(), policy) ==
          Approx(erg).epsilon(1e-3));
}
