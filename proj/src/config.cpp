// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cogmimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cogmimo {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw std::invalid_argument(what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

} // namespace

SystemConfig::SystemConfig(double frame_duration, double bandwidth, double noise_variance,
                           double interference_variance, int tx_antennas, int rx_antennas,
                           double theta)
    : frame_duration_(frame_duration), bandwidth_(bandwidth), noise_variance_(noise_variance),
      interference_variance_(interference_variance), tx_antennas_(tx_antennas),
      rx_antennas_(rx_antennas), theta_(theta)
{
    require(std::isfinite(frame_duration) && frame_duration > 0, "frame duration must be positive");
    require(std::isfinite(bandwidth) && bandwidth > 0, "bandwidth must be positive");
    require(std::isfinite(noise_variance) && noise_variance > 0, "noise variance must be positive");
    require(std::isfinite(interference_variance) && interference_variance >= 0,
            "interference variance must be non-negative");
    require(tx_antennas >= 1 && tx_antennas <= 8, "tx antennas must be in [1, 8]");
    require(rx_antennas >= 1 && rx_antennas <= 8, "rx antennas must be in [1, 8]");
    require(std::isfinite(theta) && theta >= 0, "theta must be non-negative");
}

SystemConfig SystemConfig::with_theta(double theta) const
{
    return {frame_duration_, bandwidth_, noise_variance_, interference_variance_,
            tx_antennas_, rx_antennas_, theta};
}

SystemConfig SystemConfig::with_antennas(int tx, int rx) const
{
    return {frame_duration_, bandwidth_, noise_variance_, interference_variance_, tx, rx, theta_};
}

SystemConfig SystemConfig::with_interference_variance(double variance) const
{
    return {frame_duration_, bandwidth_, noise_variance_, variance,
            tx_antennas_, rx_antennas_, theta_};
}

SensingModel::SensingModel(double p_detect, double p_false_alarm)
    : p_detect_(p_detect), p_false_alarm_(p_false_alarm)
{
    require(is_probability(p_detect), "detection probability must be in [0, 1]");
    require(is_probability(p_false_alarm), "false-alarm probability must be in [0, 1]");
}

ActivityModel::ActivityModel(double a, double b) : a_(a), b_(b)
{
    require(is_probability(a), "transition probability a must be in [0, 1]");
    require(is_probability(b), "transition probability b must be in [0, 1]");
    require(a + b > 0, "a + b must be positive");
}

bool ActivityModel::memoryless() const { return std::abs(a_ + b_ - 1.0) < 1e-12; }

PowerPolicy::PowerPolicy(double p_max, double p_int, double mu, double p2)
    : p_max_(p_max), p_int_(p_int), mu_(mu), p2_(p2)
{
}

PowerPolicy::PowerPolicy(double p_max, double p_int, double mu, double p2, double p_detect)
    : PowerPolicy(p_max, p_int, mu, p2)
{
    require(std::isfinite(p_max) && p_max >= 0, "peak power must be non-negative");
    require(!std::isnan(p_int) && p_int >= 0, "interference budget must be non-negative");
    require(mu >= 0 && mu <= 1, "mu must be in [0, 1]");
    require(is_probability(p_detect), "detection probability must be in [0, 1]");
    require(std::isfinite(p2) && p2 >= 0, "p2 must be non-negative");
    const double cap = p2_cap(p_max, p_int, p_detect, mu);
    require(p2 <= cap * (1 + 1e-12), "p2 exceeds the peak or interference cap");
}

PowerPolicy PowerPolicy::unconstrained(double mu, double p2)
{
    require(mu >= 0 && mu <= 1, "mu must be in [0, 1]");
    require(std::isfinite(p2) && p2 >= 0, "p2 must be non-negative");
    return PowerPolicy(std::max(p2, mu * p2), std::numeric_limits<double>::infinity(), mu, p2);
}

double p2_cap(double p_max, double p_int, double p_detect, double mu)
{
    require(p_max >= 0 && p_int >= 0, "powers must be non-negative");
    require(is_probability(p_detect) && mu >= 0 && mu <= 1, "mu and p_detect must be in [0, 1]");
    const double denom = p_detect * mu + 1.0 - p_detect;
    if (denom <= 0)
        return p_max;
    return std::min(p_max, p_int / denom);
}

double mu_cap(double p2, double p_int, double p_detect)
{
    require(p2 >= 0 && p_int >= 0, "powers must be non-negative");
    require(is_probability(p_detect), "detection probability must be in [0, 1]");
    if (p2 == 0 || p_detect == 0)
        return 1.0;
    const double mu = (p_int / p2 - (1.0 - p_detect)) / p_detect;
    return std::clamp(mu, 0.0, 1.0);
}

double snr_of(double p2, const SystemConfig& config)
{
    return p2 / (config.rx_antennas() * config.bandwidth() * config.noise_variance());
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

SystemConfig default_system() { return {0.1, 100.0, 1.0, 1.0, 3, 3, 0.1}; }

SensingModel default_sensing() { return {0.92, 0.21}; }

ActivityModel default_activity() { return {0.5, 0.5}; }

} // namespace cogmimo
