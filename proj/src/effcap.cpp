// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cogmimo/effcap.hpp"
#include "cogmimo/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cogmimo {

namespace {

double norm_dims(const SystemConfig& config, Normalization norm)
{
    return norm == Normalization::per_dimension ? config.rx_antennas() : 1.0;
}

struct MgfSamples {
    std::vector<double> busy;
    std::vector<double> idle;
};

MgfSamples mgf_samples(const SpectralEnsemble& ens, double w_busy, double w_idle,
                       const SystemConfig& config, CovarianceMode mode)
{
    const double bw = config.bandwidth();
    const double scale = config.theta() * config.frame_duration();
    MgfSamples out;
    out.busy.resize(ens.size());
    out.idle.resize(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        out.busy[i] = std::exp(-scale * spectral_rate(ens.busy(i), w_busy, mode, bw));
        out.idle[i] = std::exp(-scale * spectral_rate(ens.idle(i), w_idle, mode, bw));
    }
    return out;
}

void require_positive_theta(const SystemConfig& config)
{
    if (!(config.theta() > 0))
        throw std::invalid_argument("effective rate needs theta > 0; use ergodic_capacity at theta = 0");
}

void require_matching(const SpectralEnsemble& ens, const SystemConfig& config)
{
    if (ens.tx_antennas() != config.tx_antennas() || ens.rx_antennas() != config.rx_antennas())
        throw std::invalid_argument("ensemble dimensions disagree with the configuration");
}

double rate_from_radius(double radius, const SystemConfig& config, Normalization norm)
{
    const double denom = config.theta() * config.frame_duration() * config.bandwidth() *
                         norm_dims(config, norm);
    // radius <= 1 up to roundoff; clamp so the rate stays non-negative
    return -std::log(std::min(radius, 1.0)) / denom;
}

// Perron root without range checks on the MGF arguments.
double radius_of(double t1, double t2, const TransitionModel& tm)
{
    const auto& pb = tm.busy_row();
    const auto& pi = tm.idle_row();
    const double tr = (pb[0] + pi[2]) * t1 + pi[3] * t2 + pb[1];
    const double e = (pb[0] - pi[2]) * t1 - pi[3] * t2 + pb[1];
    const double disc = e * e + 4 * (pi[0] * t1 + pi[1]) * (pb[2] * t1 + pb[3] * t2);
    return 0.5 * tr + 0.5 * std::sqrt(std::max(disc, 0.0));
}

// d(radius)/d(mgf_busy), d(radius)/d(mgf_idle)
std::array<double, 2> radius_gradient(double t1, double t2, const TransitionModel& tm)
{
    const auto& pb = tm.busy_row();
    const auto& pi = tm.idle_row();
    const double e = (pb[0] - pi[2]) * t1 - pi[3] * t2 + pb[1];
    const double f = pi[0] * t1 + pi[1];
    const double g = pb[2] * t1 + pb[3] * t2;
    const double root = std::sqrt(e * e + 4 * f * g);
    std::array<double, 2> out{0.5 * (pb[0] + pi[2]), 0.5 * pi[3]};
    if (root > 0) {
        out[0] += 0.5 * (e * (pb[0] - pi[2]) + 2 * (pi[0] * g + f * pb[2])) / root;
        out[1] += 0.5 * (-e * pi[3] + 2 * f * pb[3]) / root;
    }
    return out;
}

double ergodic_at_weights(const SpectralEnsemble& ens, double w_busy, double w_idle,
                          const SystemConfig& config, const TransitionModel& tm,
                          CovarianceMode mode, Normalization norm)
{
    const double bw = config.bandwidth();
    std::vector<double> r1(ens.size()), r2(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        r1[i] = spectral_rate(ens.busy(i), w_busy, mode, bw);
        r2[i] = spectral_rate(ens.idle(i), w_idle, mode, bw);
    }
    const double value =
        tm.busy_detect_weight() * mean(r1) + tm.idle_detect_weight() * mean(r2);
    return value / (bw * norm_dims(config, norm));
}

} // namespace

TransitionModel::TransitionModel(const ActivityModel& activity, const SensingModel& sensing)
    : activity_(activity), sensing_(sensing)
{
    const double a = activity.a(), b = activity.b();
    const double pd = sensing.p_detect(), pf = sensing.p_false_alarm();
    busy_ = {(1 - a) * pd, (1 - a) * (1 - pd), a * pf, a * (1 - pf)};
    idle_ = {b * pd, b * (1 - pd), (1 - b) * pf, (1 - b) * (1 - pf)};
}

Eigen::Matrix4d TransitionModel::matrix() const
{
    Eigen::Matrix4d r;
    for (int j = 0; j < 4; ++j) {
        r(0, j) = busy_[j];
        r(1, j) = busy_[j];
        r(2, j) = idle_[j];
        r(3, j) = idle_[j];
    }
    return r;
}

double TransitionModel::busy_detect_weight() const
{
    const double a = activity_.a(), b = activity_.b();
    return (b * sensing_.p_detect() + a * sensing_.p_false_alarm()) / (a + b);
}

double TransitionModel::idle_detect_weight() const
{
    const double a = activity_.a(), b = activity_.b();
    return a * (1 - sensing_.p_false_alarm()) / (a + b);
}

double TransitionModel::off_weight() const
{
    return activity_.b() * (1 - sensing_.p_detect());
}

TransitionModel transition_probs(const ActivityModel& activity, const SensingModel& sensing)
{
    return {activity, sensing};
}

double spectral_radius_rank2(double mgf_busy, double mgf_idle, const TransitionModel& tm)
{
    if (!(mgf_busy >= 0 && mgf_busy <= 1 && mgf_idle >= 0 && mgf_idle <= 1))
        throw std::invalid_argument("spectral_radius_rank2: MGF values must lie in [0, 1]");
    return radius_of(mgf_busy, mgf_idle, tm);
}

std::string_view to_string(Normalization norm)
{
    return norm == Normalization::per_dimension ? "per_dimension" : "per_hz";
}

Normalization parse_normalization(std::string_view name)
{
    if (name == "per_hz")
        return Normalization::per_hz;
    if (name == "per_dimension")
        return Normalization::per_dimension;
    throw std::invalid_argument("unknown normalization: " + std::string(name));
}

double effective_rate_at_weights(const SpectralEnsemble& ens, double w_busy, double w_idle,
                                 const SystemConfig& config, const TransitionModel& tm,
                                 CovarianceMode mode, Normalization norm)
{
    require_positive_theta(config);
    require_matching(ens, config);
    const auto s = mgf_samples(ens, w_busy, w_idle, config, mode);
    // negative weights push the MGF above 1, outside the checked range
    const double radius = radius_of(mean(s.busy), mean(s.idle), tm);
    const double denom = config.theta() * config.frame_duration() * config.bandwidth() *
                         norm_dims(config, norm);
    return -std::log(radius) / denom;
}

double effective_rate(const SpectralEnsemble& ens, const PowerPolicy& policy,
                      const SystemConfig& config, const TransitionModel& tm, CovarianceMode mode,
                      Normalization norm)
{
    return effective_rate_estimate(ens, policy, config, tm, mode, norm).value;
}

double effective_rate(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                      const PowerPolicy& policy, const SystemConfig& config,
                      const TransitionModel& tm, CovarianceMode mode, Normalization norm)
{
    require_positive_theta(config);
    const SpectralEnsemble ens(samples, kz);
    return effective_rate(ens, policy, config, tm, mode, norm);
}

RateEstimate effective_rate_estimate(const SpectralEnsemble& ens, const PowerPolicy& policy,
                                     const SystemConfig& config, const TransitionModel& tm,
                                     CovarianceMode mode, Normalization norm)
{
    require_positive_theta(config);
    require_matching(ens, config);
    const double w_idle = config.rx_antennas() * snr_of(policy.p2(), config);
    const double w_busy = policy.mu() * w_idle;
    const auto s = mgf_samples(ens, w_busy, w_idle, config, mode);
    const auto e1 = mean_with_stderr(s.busy);
    const auto e2 = mean_with_stderr(s.idle);
    const double t1 = std::min(e1.mean, 1.0), t2 = std::min(e2.mean, 1.0);
    const double radius = spectral_radius_rank2(t1, t2, tm);

    RateEstimate out;
    out.value = rate_from_radius(radius, config, norm);
    const std::size_t n = ens.size();
    if (n > 1 && radius > 0) {
        std::vector<double> cross(n);
        for (std::size_t i = 0; i < n; ++i)
            cross[i] = (s.busy[i] - e1.mean) * (s.idle[i] - e2.mean);
        const double cov = pairwise_sum(cross) / static_cast<double>(n - 1) / static_cast<double>(n);
        const auto g = radius_gradient(t1, t2, tm);
        const double var_radius = g[0] * g[0] * e1.std_error * e1.std_error +
                                  g[1] * g[1] * e2.std_error * e2.std_error + 2 * g[0] * g[1] * cov;
        const double denom = config.theta() * config.frame_duration() * config.bandwidth() *
                             norm_dims(config, norm);
        out.std_error = std::sqrt(std::max(var_radius, 0.0)) / radius / denom;
    }
    return out;
}

EffCapResult effective_capacity(const SpectralEnsemble& ens, const SystemConfig& config,
                                const TransitionModel& tm, double p_max, double p_int,
                                SearchGrid grid, CovarianceMode mode, Normalization norm)
{
    if (grid.mu_points < 2 || grid.p2_points < 2)
        throw std::invalid_argument("effective_capacity: grid needs at least 2 points per axis");
    require_matching(ens, config);
    const double pd = tm.sensing().p_detect();
    const double n_snr_per_watt = config.rx_antennas() * snr_of(1.0, config);

    auto objective = [&](double mu, double p2) {
        const double w_idle = n_snr_per_watt * p2;
        if (config.theta() == 0)
            return ergodic_at_weights(ens, mu * w_idle, w_idle, config, tm, mode, norm);
        const auto s = mgf_samples(ens, mu * w_idle, w_idle, config, mode);
        const double radius =
            spectral_radius_rank2(std::min(mean(s.busy), 1.0), std::min(mean(s.idle), 1.0), tm);
        return rate_from_radius(radius, config, norm);
    };

    EffCapResult best;
    best.normalization = norm;
    best.value = -1;
    for (int i = 0; i < grid.mu_points; ++i) {
        const double mu = static_cast<double>(i) / (grid.mu_points - 1);
        const double cap = p2_cap(p_max, p_int, pd, mu);
        const int first = grid.exhaustive ? 0 : grid.p2_points - 1;
        for (int j = first; j < grid.p2_points; ++j) {
            const double p2 = cap * static_cast<double>(j) / (grid.p2_points - 1);
            const double value = objective(mu, p2);
            if (value > best.value) {
                best.value = value;
                best.mu_star = mu;
                best.p2_star = p2;
            }
        }
    }
    best.value = std::max(best.value, 0.0);
    return best;
}

EffCapResult effective_capacity(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                                const SystemConfig& config, const SensingModel& sensing,
                                const ActivityModel& activity, double p_max, double p_int,
                                SearchGrid grid, CovarianceMode mode, Normalization norm)
{
    const SpectralEnsemble ens(samples, kz);
    return effective_capacity(ens, config, TransitionModel(activity, sensing), p_max, p_int, grid,
                              mode, norm);
}

double ergodic_capacity(const SpectralEnsemble& ens, const PowerPolicy& policy,
                        const SystemConfig& config, const TransitionModel& tm, CovarianceMode mode,
                        Normalization norm)
{
    require_matching(ens, config);
    const double w_idle = config.rx_antennas() * snr_of(policy.p2(), config);
    return ergodic_at_weights(ens, policy.mu() * w_idle, w_idle, config, tm, mode, norm);
}

double ergodic_capacity(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                        const PowerPolicy& policy, const SystemConfig& config,
                        const SensingModel& sensing, const ActivityModel& activity,
                        CovarianceMode mode, Normalization norm)
{
    const SpectralEnsemble ens(samples, kz);
    return ergodic_capacity(ens, policy, config, TransitionModel(activity, sensing), mode, norm);
}

} // namespace cogmimo
