// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "catch_amalgamated.hpp"

#include "cogmimo/channel.hpp"
#include "cogmimo/effcap.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace cogmimo;
using Catch::Approx;

namespace {

// max |eigenvalue| of the assembled 4x4 transition matrix with the MGF diagonal
double radius_oracle(double a, double b, double pd, double pf, double t1, double t2)
{
    const double pb[4] = {(1 - a) * pd, (1 - a) * (1 - pd), a * pf, a * (1 - pf)};
    const double pi[4] = {b * pd, b * (1 - pd), (1 - b) * pf, (1 - b) * (1 - pf)};
    Eigen::Matrix4d r;
    for (int j = 0; j < 4; ++j) {
        r(0, j) = pb[j];
        r(1, j) = pb[j];
        r(2, j) = pi[j];
        r(3, j) = pi[j];
    }
    const Eigen::Vector4d phi(t1, 1, t1, t2);
    const Eigen::Matrix4d m = phi.asDiagonal() * r;
    return m.eigenvalues().cwiseAbs().maxCoeff();
}

const std::vector<ChannelSample>& ensemble_10k()
{
    static const auto samples = sample_rayleigh(3, 3, 10000, 101);
    return samples;
}

} // namespace

TEST_CASE("transition rows example")
{
    const TransitionModel tm(ActivityModel(0.1, 0.3), SensingModel(0.92, 0.21));
    const std::array<double, 4> pb{0.828, 0.072, 0.021, 0.079};
    const std::array<double, 4> pi{0.276, 0.024, 0.147, 0.553};
    for (int j = 0; j < 4; ++j) {
        CHECK(tm.busy_row()[j] == Approx(pb[j]).epsilon(1e-12));
        CHECK(tm.idle_row()[j] == Approx(pi[j]).epsilon(1e-12));
    }
    const TransitionModel perfect(ActivityModel(0.1, 0.3), SensingModel(1, 0));
    CHECK(perfect.busy_row()[1] == 0);
    CHECK(perfect.busy_row()[2] == 0);
    CHECK(perfect.idle_row()[1] == 0);
    CHECK(perfect.idle_row()[2] == 0);
}

TEST_CASE("detection weights")
{
    const TransitionModel tm(default_activity(), default_sensing());
    CHECK(tm.busy_detect_weight() == Approx(0.565).epsilon(1e-12));
    CHECK(tm.idle_detect_weight() == Approx(0.395).epsilon(1e-12));
    CHECK(tm.busy_detect_weight() + tm.idle_detect_weight() + tm.off_weight() == Approx(1));
}

TEST_CASE("spectral radius examples")
{
    const TransitionModel tm(ActivityModel(0.1, 0.3), SensingModel(0.92, 0.21));
    CHECK(spectral_radius_rank2(1, 1, tm) == Approx(1).epsilon(1e-14));
    const double oracle = radius_oracle(0.1, 0.3, 0.92, 0.21, 0.8, 0.6);
    CHECK(oracle == Approx(0.7817).margin(5e-5));
    CHECK(std::abs(spectral_radius_rank2(0.8, 0.6, tm) - oracle) < 1e-12);
    CHECK_THROWS_AS(spectral_radius_rank2(1.2, 0.5, tm), std::invalid_argument);

    const TransitionModel mem(ActivityModel(0.4, 0.6), SensingModel(0.9, 0.15));
    const double collapse = (0.6 * 0.9 + 0.4 * 0.15) * 0.7 + 0.4 * 0.85 * 0.3 + 0.6 * 0.1;
    CHECK(spectral_radius_rank2(0.7, 0.3, mem) == Approx(collapse).epsilon(1e-13));
}

TEST_CASE("property: closed-form radius matches the eigen oracle")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 1000; ++t) {
        const double a = u(rng), b = u(rng), pd = u(rng), pf = u(rng), t1 = u(rng), t2 = u(rng);
        if (a + b == 0)
            continue;
        const TransitionModel tm(ActivityModel(a, b), SensingModel(pd, pf));
        CHECK(std::abs(spectral_radius_rank2(t1, t2, tm) - radius_oracle(a, b, pd, pf, t1, t2)) <=
              1e-10);
        // at most two nonzero eigenvalues
        Eigen::Matrix4d m = tm.matrix();
        const Eigen::Vector4d phi(t1, 1, t1, t2);
        m = phi.asDiagonal() * m;
        const Eigen::Vector4d ev = m.eigenvalues().cwiseAbs();
        std::vector<double> mags(ev.data(), ev.data() + 4);
        std::sort(mags.begin(), mags.end());
        CHECK(mags[1] < 1e-7);
    }
}

TEST_CASE("ergodic limit at tiny theta")
{
    const auto sys = default_system().with_theta(1e-8);
    const TransitionModel tm(default_activity(), default_sensing());
    const auto kz = default_noise_covariance(sys);
    const auto policy = PowerPolicy(10, 1, 0.5, p2_cap(10, 1, 0.92, 0.5), 0.92);
    const double er = effective_rate(ensemble_10k(), kz, policy, sys, tm, CovarianceMode::uniform);
    const double erg = ergodic_capacity(ensemble_10k(), kz, policy, sys, default_sensing(),
                                        default_activity(), CovarianceMode::uniform);
    CHECK(er == Approx(erg).epsilon(1e-3));
}

TEST_CASE("ergodic capacity is the detection-weighted mean rate")
{
    const auto sys = default_system();
    const auto kz = default_noise_covariance(sys);
    const TransitionModel tm(default_activity(), default_sensing());
    const auto policy = PowerPolicy::unconstrained(0.7, 40);
    const auto& samples = ensemble_10k();
    double s1 = 0, s2 = 0;
    for (const auto& h : samples) {
        const auto r = scenario_rates(h, kz, policy, sys, CovarianceMode::uniform);
        s1 += r.r1;
        s2 += r.r2;
    }
    const double n = samples.size();
    const double expect = (0.565 * s1 / n + 0.395 * s2 / n) / sys.bandwidth();
    CHECK(ergodic_capacity(samples, kz, policy, sys, default_sensing(), default_activity(),
                           CovarianceMode::uniform) == Approx(expect).epsilon(1e-10));
    CHECK(ergodic_capacity(samples, kz, policy, sys, default_sensing(), default_activity(),
                           CovarianceMode::uniform, Normalization::per_dimension) ==
          Approx(expect / 3).epsilon(1e-10));

    // idle-only chain with perfect sensing keeps just the idle term
    const double idle_only = ergodic_capacity(samples, kz, policy, sys, SensingModel(1, 0),
                                              ActivityModel(1, 0), CovarianceMode::uniform);
    CHECK(idle_only == Approx(s2 / n / sys.bandwidth()).epsilon(1e-10));
}

TEST_CASE("memoryless chain matches the single-expectation formula")
{
    const auto sys = default_system().with_theta(0.3);
    const auto kz = default_noise_covariance(sys);
    const ActivityModel act(0.35, 0.65);
    const TransitionModel tm(act, default_sensing());
    const auto policy = PowerPolicy::unconstrained(0.6, 30);
    const auto& samples = ensemble_10k();
    double e1 = 0, e2 = 0;
    const double k = sys.theta() * sys.frame_duration();
    for (const auto& h : samples) {
        const auto r = scenario_rates(h, kz, policy, sys, CovarianceMode::uniform);
        e1 += std::exp(-k * r.r1);
        e2 += std::exp(-k * r.r2);
    }
    const double n = samples.size();
    const double inner = tm.busy_detect_weight() * e1 / n + tm.idle_detect_weight() * e2 / n +
                         0.65 * (1 - 0.92);
    const double expect = -std::log(inner) / (k * sys.bandwidth());
    for (auto norm : {Normalization::per_hz, Normalization::per_dimension}) {
        const double dims = norm == Normalization::per_dimension ? 3 : 1;
        CHECK(effective_rate(samples, kz, policy, sys, tm, CovarianceMode::uniform, norm) ==
              Approx(expect / dims).epsilon(1e-10));
    }
}

TEST_CASE("zero channel supports no rate")
{
    const auto sys = default_system();
    std::vector<ChannelSample> zero(10, ChannelSample{CMatrix::Zero(3, 3)});
    const TransitionModel tm(default_activity(), default_sensing());
    CHECK(effective_rate(zero, default_noise_covariance(sys), PowerPolicy::unconstrained(1, 10), sys,
                         tm, CovarianceMode::uniform) == Approx(0).margin(1e-15));
}

TEST_CASE("property: effective rate monotone in theta and p2")
{
    const auto sys = default_system();
    const SpectralEnsemble ens(ensemble_10k(), default_noise_covariance(sys));
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 30; ++t) {
        const TransitionModel tm(ActivityModel(0.05 + 0.9 * u(rng), 0.05 + 0.9 * u(rng)),
                                 SensingModel(u(rng), u(rng)));
        const double mu = u(rng), p2 = 0.1 + 20 * u(rng);
        const auto policy = PowerPolicy::unconstrained(mu, p2);
        double prev = std::numeric_limits<double>::infinity();
        for (double th : {0.001, 0.01, 0.1, 1.0, 3.0}) {
            const double r = effective_rate(ens, policy, sys.with_theta(th), tm, CovarianceMode::uniform);
            CHECK(r <= prev * (1 + 1e-12));
            prev = r;
        }
        const double lo = effective_rate(ens, policy, sys, tm, CovarianceMode::uniform);
        const double hi = effective_rate(ens, PowerPolicy::unconstrained(mu, p2 * 1.5), sys, tm,
                                         CovarianceMode::uniform);
        CHECK(hi >= lo * (1 - 1e-12));
    }
}

TEST_CASE("optimizer endpoints")
{
    const auto sys = default_system();
    const SpectralEnsemble ens(ensemble_10k(), default_noise_covariance(sys));
    const TransitionModel tm(default_activity(), default_sensing());
    const auto loose = effective_capacity(ens, sys, tm, 10, 1e6);
    CHECK(loose.mu_star == 1);
    CHECK(loose.p2_star == Approx(10));
    const auto tight = effective_capacity(ens, sys, tm, 10, 1e-9);
    CHECK(tight.value < 1e-6);
    CHECK(tight.value >= 0);
}

TEST_CASE("pruned grid agrees with the exhaustive grid")
{
    const auto sys = default_system();
    const SpectralEnsemble ens(std::span<const ChannelSample>(ensemble_10k()).first(1000), default_noise_covariance(sys));
    const TransitionModel tm(default_activity(), default_sensing());
    for (double p_int : {0.1, 1.0, 10.0}) {
        const auto fast = effective_capacity(ens, sys, tm, 10, p_int, SearchGrid{41, 41, false});
        const auto full = effective_capacity(ens, sys, tm, 10, p_int, SearchGrid{41, 41, true});
        CHECK(fast.value == Approx(full.value).epsilon(1e-12));
        CHECK(fast.mu_star == full.mu_star);
    }
}

TEST_CASE("ensemble statistics carry a standard error")
{
    const auto sys = default_system();
    const SpectralEnsemble ens(ensemble_10k(), default_noise_covariance(sys));
    const TransitionModel tm(default_activity(), default_sensing());
    const auto policy = PowerPolicy::unconstrained(1, 10);
    const auto est = effective_rate_estimate(ens, policy, sys, tm, CovarianceMode::uniform);
    CHECK(est.value == effective_rate(ens, policy, sys, tm, CovarianceMode::uniform));
    CHECK(est.std_error > 0);
    CHECK(est.std_error < 0.01 * est.value);
}

TEST_CASE("normalization names round trip")
{
    CHECK(parse_normalization("per_hz") == Normalization::per_hz);
    CHECK(parse_normalization(to_string(Normalization::per_dimension)) == Normalization::per_dimension);
    CHECK_THROWS_AS(parse_normalization("x"), std::invalid_argument);
}
