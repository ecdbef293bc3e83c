// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

namespace cogmimo {

/// Frame timing, bandwidth, noise levels, antenna counts and QoS exponent.
class SystemConfig {
public:
    SystemConfig(double frame_duration, double bandwidth, double noise_variance,
                 double interference_variance, int tx_antennas, int rx_antennas, double theta);

    double frame_duration() const { return frame_duration_; }
    double bandwidth() const { return bandwidth_; }
    double noise_variance() const { return noise_variance_; }
    double interference_variance() const { return interference_variance_; }
    int tx_antennas() const { return tx_antennas_; }
    int rx_antennas() const { return rx_antennas_; }
    double theta() const { return theta_; }

    SystemConfig with_theta(double theta) const;
    SystemConfig with_antennas(int tx, int rx) const;
    SystemConfig with_interference_variance(double variance) const;

private:
    double frame_duration_;
    double bandwidth_;
    double noise_variance_;
    double interference_variance_;
    int tx_antennas_;
    int rx_antennas_;
    double theta_;
};

/// Detection and false-alarm probabilities of the channel sensor.
class SensingModel {
public:
    SensingModel(double p_detect, double p_false_alarm);

    double p_detect() const { return p_detect_; }
    double p_false_alarm() const { return p_false_alarm_; }

private:
    double p_detect_;
    double p_false_alarm_;
};

/// Two-state primary-user activity chain: a = P(busy -> idle), b = P(idle -> busy).
class ActivityModel {
public:
    ActivityModel(double a, double b);

    double a() const { return a_; }
    double b() const { return b_; }

    // stationary probability that the primary user is active
    double busy_probability() const { return b_ / (a_ + b_); }
    bool memoryless() const;

private:
    double a_;
    double b_;
};

/// Secondary transmit powers (watts). p1 = mu * p2 is used when the channel is sensed busy.
class PowerPolicy {
public:
    PowerPolicy(double p_max, double p_int, double mu, double p2, double p_detect);

    // analysis policy with no peak or interference budget
    static PowerPolicy unconstrained(double mu, double p2);

    double p_max() const { return p_max_; }
    double p_int() const { return p_int_; }
    double mu() const { return mu_; }
    double p2() const { return p2_; }
    double p1() const { return mu_ * p2_; }

private:
    PowerPolicy(double p_max, double p_int, double mu, double p2);

    double p_max_;
    double p_int_;
    double mu_;
    double p2_;
};

// Largest p2 meeting both the peak and the average interference budget.
double p2_cap(double p_max, double p_int, double p_detect, double mu);

// Largest mu in [0, 1] keeping interference within p_int at a given p2.
double mu_cap(double p2, double p_int, double p_detect);

// Per-receive-antenna SNR: p2 / (N B sigma_n^2).
double snr_of(double p2, const SystemConfig& config);

double db_to_linear(double db);
double linear_to_db(double linear);

SystemConfig default_system();
SensingModel default_sensing();
ActivityModel default_activity();
inline constexpr double kDefaultPeakPower = 10.0;

} // namespace cogmimo
