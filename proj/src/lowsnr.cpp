// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cogmimo/lowsnr.hpp"
#include "cogmimo/stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cogmimo {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// E[l1 x1 + l2 x2], E[l1 x1^2 + l2 x2^2], E[l1 x1^2/m1 + l2 x2^2/m2] over top eigenvalues
struct TopMoments {
    double first = 0;
    double second = 0;
    double second_shared = 0;
    int m1 = 1;
    int m2 = 1;
};

TopMoments top_moments(const SpectralEnsemble& ens, const TransitionModel& tm)
{
    const double l1 = tm.busy_detect_weight(), l2 = tm.idle_detect_weight();
    const std::size_t n = ens.size();
    std::vector<double> first(n), second(n), shared(n);
    TopMoments out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto b = top_eigen(ens.busy(i));
        const auto d = top_eigen(ens.idle(i));
        first[i] = l1 * b.value + l2 * d.value;
        second[i] = l1 * b.value * b.value + l2 * d.value * d.value;
        shared[i] = l1 * b.value * b.value / b.multiplicity + l2 * d.value * d.value / d.multiplicity;
        out.m1 = std::max(out.m1, b.multiplicity);
        out.m2 = std::max(out.m2, d.multiplicity);
    }
    out.first = mean(first);
    out.second = mean(second);
    out.second_shared = mean(shared);
    return out;
}

void require_memoryless(const TransitionModel& tm)
{
    if (!tm.activity().memoryless())
        throw std::invalid_argument("second-order low-SNR terms need a + b = 1");
}

double qos_scale(const SystemConfig& config)
{
    return config.theta() * config.frame_duration() * config.bandwidth() * config.rx_antennas();
}

double second_from_moments(double x, double y, double z, const SystemConfig& config)
{
    const double c = qos_scale(config);
    const int n = config.rx_antennas();
    return c / (kLn2 * kLn2) * x * x - c / (kLn2 * kLn2) * y - n / kLn2 * z;
}

double slope_from_moments(double x, double y, double z, const SystemConfig& config)
{
    const double denom = qos_scale(config) * (y - x * x) + config.rx_antennas() * z * kLn2;
    if (denom == 0)
        throw std::domain_error("wideband slope undefined: zero second derivative");
    return 2 * kLn2 * x * x / denom;
}

EnergyPerBit energy_from_derivative(double c_dot)
{
    if (!(c_dot > 0))
        throw std::domain_error("minimum energy per bit undefined: zero first derivative");
    return {1.0 / c_dot, linear_to_db(1.0 / c_dot)};
}

} // namespace

double first_derivative(const SpectralEnsemble& ens, const TransitionModel& tm)
{
    const double l1 = tm.busy_detect_weight(), l2 = tm.idle_detect_weight();
    std::vector<double> top(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i)
        top[i] = l1 * ens.busy(i)[0] + l2 * ens.idle(i)[0];
    return mean(top) / kLn2;
}

double first_derivative(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                        const SensingModel& sensing, const ActivityModel& activity)
{
    return first_derivative(SpectralEnsemble(samples, kz), TransitionModel(activity, sensing));
}

EnergyPerBit min_energy_per_bit(const SpectralEnsemble& ens, const TransitionModel& tm)
{
    return energy_from_derivative(first_derivative(ens, tm));
}

EnergyPerBit min_energy_per_bit(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                                const SensingModel& sensing, const ActivityModel& activity)
{
    return min_energy_per_bit(SpectralEnsemble(samples, kz), TransitionModel(activity, sensing));
}

double second_derivative_sym(const SpectralEnsemble& ens, const TransitionModel& tm,
                             const SystemConfig& config)
{
    require_memoryless(tm);
    const auto mom = top_moments(ens, tm);
    return second_from_moments(mom.first, mom.second, mom.second_shared, config);
}

double second_derivative_sym(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                             const SensingModel& sensing, const ActivityModel& activity,
                             const SystemConfig& config)
{
    return second_derivative_sym(SpectralEnsemble(samples, kz), TransitionModel(activity, sensing),
                                 config);
}

double wideband_slope(const SpectralEnsemble& ens, const TransitionModel& tm,
                      const SystemConfig& config)
{
    const double c_dot = first_derivative(ens, tm);
    const double c_ddot = second_derivative_sym(ens, tm, config);
    if (c_ddot == 0)
        throw std::domain_error("wideband slope undefined: zero second derivative");
    return 2 * c_dot * c_dot * kLn2 / (-c_ddot);
}

double wideband_slope(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                      const SensingModel& sensing, const ActivityModel& activity,
                      const SystemConfig& config)
{
    return wideband_slope(SpectralEnsemble(samples, kz), TransitionModel(activity, sensing), config);
}

double wideband_slope_explicit(const SpectralEnsemble& ens, const TransitionModel& tm,
                               const SystemConfig& config)
{
    require_memoryless(tm);
    const auto mom = top_moments(ens, tm);
    return slope_from_moments(mom.first, mom.second, mom.second_shared, config);
}

TraceMoments gaussian_trace_moments(int m, int n)
{
    const double nm = static_cast<double>(n) * m;
    return {nm, nm * (nm + 1), nm * (n + m)};
}

TraceMomentEstimate estimate_trace_moments(std::span<const ChannelSample> samples)
{
    const std::size_t count = samples.size();
    std::vector<double> tr(count), tr2(count), trsq(count);
    for (std::size_t i = 0; i < count; ++i) {
        const CMatrix g = samples[i].h.adjoint() * samples[i].h;
        tr[i] = g.trace().real();
        tr2[i] = tr[i] * tr[i];
        trsq[i] = (g * g).trace().real();
    }
    const auto a = mean_with_stderr(tr), b = mean_with_stderr(tr2), c = mean_with_stderr(trsq);
    return {{a.mean, b.mean, c.mean}, {a.std_error, b.std_error, c.std_error}};
}

UniformForms uniform_forms_from_moments(const TraceMoments& mom, const SystemConfig& config,
                                        const TransitionModel& tm, double sigma_s2)
{
    if (!(sigma_s2 > 0))
        throw std::invalid_argument("closed forms need a positive interference variance");
    const double l1 = tm.busy_detect_weight(), l2 = tm.idle_detect_weight();
    const double inv = 1.0 / sigma_s2;
    UniformForms out;
    const double x = (l1 * inv + l2) * mom.trace;
    out.ebn0_min = kLn2 / x;
    if (tm.activity().memoryless()) {
        const double y = (l1 * inv * inv + l2) * mom.trace_squared;
        const double z = (l1 * inv * inv + l2) * mom.trace_of_square;
        out.s0 = slope_from_moments(x, y, z, config);
    } else {
        out.s0 = kNaN;
    }
    return out;
}

UniformForms uniform_closed_forms(const SystemConfig& config, const SensingModel& sensing,
                                  const ActivityModel& activity, double sigma_s2)
{
    return uniform_forms_from_moments(
        gaussian_trace_moments(config.tx_antennas(), config.rx_antennas()), config,
        TransitionModel(activity, sensing), sigma_s2);
}

LowSnrReport lowsnr_report(const SpectralEnsemble& ens, const TransitionModel& tm,
                           const SystemConfig& config)
{
    LowSnrReport out;
    out.ell1 = tm.busy_detect_weight();
    out.ell2 = tm.idle_detect_weight();
    out.c_dot = first_derivative(ens, tm);
    out.ebn0_min = energy_from_derivative(out.c_dot);
    const auto mom = top_moments(ens, tm);
    out.m1 = mom.m1;
    out.m2 = mom.m2;
    if (tm.activity().memoryless()) {
        out.c_ddot = second_from_moments(mom.first, mom.second, mom.second_shared, config);
        out.s0 = 2 * out.c_dot * out.c_dot * kLn2 / (-out.c_ddot);
        out.slope_available = true;
    } else {
        out.c_ddot = kNaN;
        out.s0 = kNaN;
        out.slope_reason = "unsupported_regime_a_plus_b_ne_1";
    }
    return out;
}

double lowsnr_expansion(const LowSnrReport& report, double snr)
{
    if (!(snr >= 0))
        throw std::invalid_argument("lowsnr_expansion: snr must be non-negative");
    if (!report.slope_available)
        throw std::invalid_argument("lowsnr_expansion: second derivative unavailable (a + b != 1)");
    return report.c_dot * snr + report.c_ddot * snr * snr / 2;
}

double beamformed_effective_rate(const SpectralEnsemble& ens, double snr,
                                 const SystemConfig& config, const TransitionModel& tm)
{
    const double w = config.rx_antennas() * snr;
    return effective_rate_at_weights(ens, w, w, config, tm, CovarianceMode::beamform,
                                     Normalization::per_dimension);
}

} // namespace cogmimo
