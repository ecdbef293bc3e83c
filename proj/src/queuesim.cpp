// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cogmimo/queuesim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cogmimo {

namespace {

constexpr int kPercentilePoints = 8;

std::vector<double> tail_thresholds(std::vector<double> sorted)
{
    std::vector<double> out;
    const std::size_t n = sorted.size();
    for (int i = 0; i < kPercentilePoints; ++i) {
        const double tail = std::pow(10.0, -1.0 - 2.0 * i / (kPercentilePoints - 1));
        const auto idx = std::min(n - 1, static_cast<std::size_t>(std::floor((1.0 - tail) * n)));
        const double q = sorted[idx];
        if (q > 0 && (out.empty() || q > out.back()))
            out.push_back(q);
    }
    return out;
}

} // namespace

QueueTrace simulate(const SystemConfig& config, const SensingModel& sensing,
                    const ActivityModel& activity, const PowerPolicy& policy,
                    double arrival_bits_per_frame, std::size_t frames, std::uint64_t seed,
                    CovarianceMode mode, const NoiseCovariance& kz)
{
    if (frames < 1)
        throw std::invalid_argument("simulate: need at least one frame");
    if (!(arrival_bits_per_frame >= 0))
        throw std::invalid_argument("simulate: arrival must be non-negative");
    if (kz.dim() != config.rx_antennas())
        throw std::invalid_argument("simulate: noise covariance does not match rx antennas");

    const int m = config.tx_antennas(), n = config.rx_antennas();
    const double w_idle = n * snr_of(policy.p2(), config);
    const double w_busy = policy.mu() * w_idle;
    const double t = config.frame_duration(), bw = config.bandwidth();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    QueueTrace trace;
    trace.arrivals = arrival_bits_per_frame;
    trace.queue_bits.resize(frames);
    trace.service.resize(frames);
    trace.state_seq.resize(frames);

    bool busy = unit(rng) < activity.busy_probability();
    double q = 0;
    for (std::size_t k = 0; k < frames; ++k) {
        if (k > 0)
            busy = busy ? !(unit(rng) < activity.a()) : unit(rng) < activity.b();
        const bool sensed_busy = unit(rng) < (busy ? sensing.p_detect() : sensing.p_false_alarm());
        // the channel is drawn every frame so paths stay coupled across arrival rates
        const ChannelSample h = draw_rayleigh(m, n, rng);

        std::uint8_t state;
        double served = 0;
        if (sensed_busy) {
            state = busy ? 1 : 3;
            const CMatrix w = kz.k_z_inv_sqrt() * h.h;
            served = t * spectral_rate(gram_spectrum(w.adjoint() * w), w_busy, mode, bw);
        } else if (busy) {
            state = 2;
        } else {
            state = 4;
            served = t * spectral_rate(gram_spectrum(h.h.adjoint() * h.h), w_idle, mode, bw);
        }
        q = std::max(0.0, q + arrival_bits_per_frame - served);
        trace.queue_bits[k] = q;
        trace.service[k] = served;
        trace.state_seq[k] = state;
    }
    return trace;
}

QueueTrace simulate(const SystemConfig& config, const SensingModel& sensing,
                    const ActivityModel& activity, const PowerPolicy& policy,
                    double arrival_bits_per_frame, std::size_t frames, std::uint64_t seed,
                    CovarianceMode mode)
{
    return simulate(config, sensing, activity, policy, arrival_bits_per_frame, frames, seed, mode,
                    default_noise_covariance(config));
}

DecayEstimate estimate_decay(std::span<const double> queue, std::span<const double> thresholds)
{
    if (queue.empty())
        throw std::invalid_argument("estimate_decay: empty queue trace");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i] > thresholds[i - 1]))
            throw std::invalid_argument("estimate_decay: thresholds must be strictly increasing");

    std::vector<double> sorted(queue.begin(), queue.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    std::vector<double> xs, ys;
    std::size_t top = 0;
    for (double thr : thresholds) {
        const auto count = static_cast<std::size_t>(
            sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), thr));
        if (count == 0)
            continue;
        xs.push_back(thr);
        ys.push_back(std::log(count / n));
        top = count;
    }
    if (xs.size() < 3)
        throw std::invalid_argument("estimate_decay: fewer than 3 thresholds with a non-empty tail");

    const std::size_t k = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;

    DecayEstimate out;
    out.theta_hat = std::max(0.0, -slope);
    out.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    out.thresholds = xs;
    out.top_exceedances = top;
    out.low_confidence = out.r_squared < kLowConfidenceR2 || top < kMinTopExceedances;
    return out;
}

DecayEstimate estimate_decay(std::span<const double> queue, double warmup_fraction)
{
    if (!(warmup_fraction >= 0 && warmup_fraction < 1))
        throw std::invalid_argument("estimate_decay: warm-up fraction must be in [0, 1)");
    const auto skip = static_cast<std::size_t>(warmup_fraction * queue.size());
    const auto tail = queue.subspan(skip);
    if (tail.empty())
        throw std::invalid_argument("estimate_decay: nothing left after warm-up");

    std::vector<double> sorted(tail.begin(), tail.end());
    std::sort(sorted.begin(), sorted.end());
    auto thresholds = tail_thresholds(sorted);
    bool sparse = false;
    if (thresholds.size() < 3) {
        // mostly-empty queue: use percentiles of the busy periods instead
        std::vector<double> positive(std::upper_bound(sorted.begin(), sorted.end(), 0.0),
                                     sorted.end());
        if (positive.size() >= 3)
            thresholds = tail_thresholds(std::move(positive));
        sparse = true;
    }
    auto out = estimate_decay(tail, thresholds);
    out.low_confidence = out.low_confidence || sparse;
    return out;
}

DecayEstimate estimate_decay(const QueueTrace& trace, double warmup_fraction)
{
    return estimate_decay(std::span<const double>(trace.queue_bits), warmup_fraction);
}

} // namespace cogmimo
