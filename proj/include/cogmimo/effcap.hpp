// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include "cogmimo/channel.hpp"
#include "cogmimo/config.hpp"
#include "cogmimo/rates.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string_view>

namespace cogmimo {

/// Four-state (PU activity x sensing outcome) chain. Row order: busy/detected busy,
/// busy/detected idle, idle/detected busy, idle/detected idle.
class TransitionModel {
public:
    TransitionModel(const ActivityModel& activity, const SensingModel& sensing);

    // next-state probabilities from a busy (resp. idle) current state
    const std::array<double, 4>& busy_row() const { return busy_; }
    const std::array<double, 4>& idle_row() const { return idle_; }
    Eigen::Matrix4d matrix() const;

    // long-run fraction of frames served at r1 and at r2
    double busy_detect_weight() const;
    double idle_detect_weight() const;
    // b (1 - P_d): the OFF-state mass in the memoryless case
    double off_weight() const;

    const ActivityModel& activity() const { return activity_; }
    const SensingModel& sensing() const { return sensing_; }

private:
    ActivityModel activity_;
    SensingModel sensing_;
    std::array<double, 4> busy_{};
    std::array<double, 4> idle_{};
};

TransitionModel transition_probs(const ActivityModel& activity, const SensingModel& sensing);

// Perron root of diag(mgf_busy, 1, mgf_busy, mgf_idle) * R.
double spectral_radius_rank2(double mgf_busy, double mgf_idle, const TransitionModel& tm);

enum class Normalization { per_dimension, per_hz };

std::string_view to_string(Normalization norm);
Normalization parse_normalization(std::string_view name);

struct EffCapResult {
    double value = 0;
    double mu_star = 0;
    double p2_star = 0;
    Normalization normalization = Normalization::per_hz;
};

struct RateEstimate {
    double value = 0;
    double std_error = 0; // delta-method Monte Carlo error
};

double effective_rate(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                      const PowerPolicy& policy, const SystemConfig& config,
                      const TransitionModel& tm, CovarianceMode mode,
                      Normalization norm = Normalization::per_hz);

double effective_rate(const SpectralEnsemble& ensemble, const PowerPolicy& policy,
                      const SystemConfig& config, const TransitionModel& tm, CovarianceMode mode,
                      Normalization norm = Normalization::per_hz);

RateEstimate effective_rate_estimate(const SpectralEnsemble& ensemble, const PowerPolicy& policy,
                                     const SystemConfig& config, const TransitionModel& tm,
                                     CovarianceMode mode,
                                     Normalization norm = Normalization::per_hz);

// Effective rate at explicit busy/idle SNR weights (mu N snr and N snr). Negative weights
// are accepted where the rates stay defined, for differentiation through zero.
double effective_rate_at_weights(const SpectralEnsemble& ensemble, double w_busy, double w_idle,
                                 const SystemConfig& config, const TransitionModel& tm,
                                 CovarianceMode mode, Normalization norm = Normalization::per_hz);

struct SearchGrid {
    int mu_points = 101;
    int p2_points = 101;
    // Evaluate every P2 node. Off by default: for fixed mu the objective is non-decreasing
    // in P2, so the top node of each P2 column is the column maximum.
    bool exhaustive = false;
};

EffCapResult effective_capacity(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                                const SystemConfig& config, const SensingModel& sensing,
                                const ActivityModel& activity, double p_max, double p_int,
                                SearchGrid grid = {}, CovarianceMode mode = CovarianceMode::uniform,
                                Normalization norm = Normalization::per_hz);

EffCapResult effective_capacity(const SpectralEnsemble& ensemble, const SystemConfig& config,
                                const TransitionModel& tm, double p_max, double p_int,
                                SearchGrid grid = {}, CovarianceMode mode = CovarianceMode::uniform,
                                Normalization norm = Normalization::per_hz);

double ergodic_capacity(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                        const PowerPolicy& policy, const SystemConfig& config,
                        const SensingModel& sensing, const ActivityModel& activity,
                        CovarianceMode mode, Normalization norm = Normalization::per_hz);

double ergodic_capacity(const SpectralEnsemble& ensemble, const PowerPolicy& policy,
                        const SystemConfig& config, const TransitionModel& tm,
                        CovarianceMode mode, Normalization norm = Normalization::per_hz);

} // namespace cogmimo
