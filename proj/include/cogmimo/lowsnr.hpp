// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include "cogmimo/effcap.hpp"
#include "cogmimo/rates.hpp"

#include <span>
#include <string>

namespace cogmimo {

// Low-SNR quantities use the per-dimension normalization and mu = 1 throughout.

struct EnergyPerBit {
    double linear = 0;
    double db = 0;
};

struct LowSnrReport {
    double c_dot = 0;
    double c_ddot = 0;     // NaN outside the a + b = 1 regime
    EnergyPerBit ebn0_min;
    double s0 = 0;         // bits/s/Hz/(3 dB)/receive antenna; NaN when c_ddot is
    double ell1 = 0;
    double ell2 = 0;
    int m1 = 1;            // largest top-eigenvalue multiplicity seen, busy branch
    int m2 = 1;            // same for the idle branch
    bool slope_available = false;
    std::string slope_reason; // empty when slope_available
};

double first_derivative(const SpectralEnsemble& ensemble, const TransitionModel& tm);
double first_derivative(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                        const SensingModel& sensing, const ActivityModel& activity);

EnergyPerBit min_energy_per_bit(const SpectralEnsemble& ensemble, const TransitionModel& tm);
EnergyPerBit min_energy_per_bit(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                                const SensingModel& sensing, const ActivityModel& activity);

// Requires a + b = 1.
double second_derivative_sym(const SpectralEnsemble& ensemble, const TransitionModel& tm,
                             const SystemConfig& config);
double second_derivative_sym(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                             const SensingModel& sensing, const ActivityModel& activity,
                             const SystemConfig& config);

// 2 c_dot^2 ln2 / (-c_ddot)
double wideband_slope(const SpectralEnsemble& ensemble, const TransitionModel& tm,
                      const SystemConfig& config);
double wideband_slope(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                      const SensingModel& sensing, const ActivityModel& activity,
                      const SystemConfig& config);

// Same slope from the expanded moment expression.
double wideband_slope_explicit(const SpectralEnsemble& ensemble, const TransitionModel& tm,
                               const SystemConfig& config);

/// E tr(G), E tr^2(G), E tr(G^2) for G = H^H H.
struct TraceMoments {
    double trace = 0;
    double trace_squared = 0;
    double trace_of_square = 0;
};

TraceMoments gaussian_trace_moments(int m, int n);

struct TraceMomentEstimate {
    TraceMoments mean;
    TraceMoments std_error;
};

TraceMomentEstimate estimate_trace_moments(std::span<const ChannelSample> samples);

struct UniformForms {
    double ebn0_min = 0;
    double s0 = 0; // NaN unless a + b = 1
};

// Equal-power closed forms with K_z^{-1} = I / sigma_s2 and trace moments substituted.
UniformForms uniform_closed_forms(const SystemConfig& config, const SensingModel& sensing,
                                  const ActivityModel& activity, double sigma_s2);
UniformForms uniform_forms_from_moments(const TraceMoments& moments, const SystemConfig& config,
                                        const TransitionModel& tm, double sigma_s2);

LowSnrReport lowsnr_report(const SpectralEnsemble& ensemble, const TransitionModel& tm,
                           const SystemConfig& config);

// c_dot snr + c_ddot snr^2 / 2
double lowsnr_expansion(const LowSnrReport& report, double snr);

// Per-dimension effective rate at SNR `snr` with beamforming covariances and mu = 1.
// Negative snr is allowed down to the point where a rate argument reaches zero.
double beamformed_effective_rate(const SpectralEnsemble& ensemble, double snr,
                                 const SystemConfig& config, const TransitionModel& tm);

} // namespace cogmimo
