// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include "cogmimo/channel.hpp"
#include "cogmimo/config.hpp"
#include "cogmimo/rates.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cogmimo {

struct QueueTrace {
    std::vector<double> queue_bits;     // after each frame
    double arrivals = 0;                // bits per frame
    std::vector<double> service;        // bits served in each frame
    std::vector<std::uint8_t> state_seq; // 1..4: (busy,sensed busy) (busy,sensed idle) (idle,sensed busy) (idle,sensed idle)
};

// Scenario-2 frames serve nothing and their bits stay queued.
QueueTrace simulate(const SystemConfig& config, const SensingModel& sensing,
                    const ActivityModel& activity, const PowerPolicy& policy,
                    double arrival_bits_per_frame, std::size_t frames, std::uint64_t seed,
                    CovarianceMode mode = CovarianceMode::uniform);

QueueTrace simulate(const SystemConfig& config, const SensingModel& sensing,
                    const ActivityModel& activity, const PowerPolicy& policy,
                    double arrival_bits_per_frame, std::size_t frames, std::uint64_t seed,
                    CovarianceMode mode, const NoiseCovariance& kz);

struct DecayEstimate {
    double theta_hat = 0;
    double r_squared = 0;
    std::vector<double> thresholds;
    std::size_t top_exceedances = 0; // samples at or above the largest threshold
    bool low_confidence = false;
};

inline constexpr double kDefaultWarmup = 0.1;
inline constexpr double kLowConfidenceR2 = 0.9;
inline constexpr std::size_t kMinTopExceedances = 30;

// Least-squares fit of ln P(Q >= q) over the given strictly increasing thresholds.
DecayEstimate estimate_decay(std::span<const double> queue, std::span<const double> thresholds);

// Drops the warm-up prefix, then fits at the empirical 90th..99.9th percentiles.
DecayEstimate estimate_decay(const QueueTrace& trace, double warmup_fraction = kDefaultWarmup);
DecayEstimate estimate_decay(std::span<const double> queue, double warmup_fraction = kDefaultWarmup);

} // namespace cogmimo
