// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include "cogmimo/config.hpp"
#include "cogmimo/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace cogmimo {

/// One N x M channel realization.
struct ChannelSample {
    CMatrix h;

    int rx() const { return static_cast<int>(h.rows()); }
    int tx() const { return static_cast<int>(h.cols()); }
};

/// Normalized noise-plus-interference covariance and its inverse factors.
class NoiseCovariance {
public:
    // k_z = (N sigma_s^2 k_s + sigma_n^2 I) / sigma_n^2 for a trace-1 PSD k_s
    static NoiseCovariance from_interference(const CMatrix& k_s, double sigma_s2, double sigma_n2);

    // any Hermitian positive-definite k_z
    static NoiseCovariance from_matrix(const CMatrix& k_z);

    const CMatrix& k_z() const { return k_z_; }
    const CMatrix& k_z_inv() const { return k_z_inv_; }
    const CMatrix& k_z_inv_sqrt() const { return k_z_inv_sqrt_; }
    int dim() const { return static_cast<int>(k_z_.rows()); }

private:
    explicit NoiseCovariance(const CMatrix& k_z);

    CMatrix k_z_;
    CMatrix k_z_inv_;
    CMatrix k_z_inv_sqrt_;
};

NoiseCovariance build_kz(const CMatrix& k_s, double sigma_s2, double sigma_n2);

// K_s = I/N with the config's noise and interference levels.
NoiseCovariance default_noise_covariance(const SystemConfig& config);

/// Trace-1 positive-semidefinite transmit covariance.
class InputCovariance {
public:
    explicit InputCovariance(CMatrix k_x);

    static InputCovariance uniform(int m);

    const CMatrix& matrix() const { return k_x_; }
    int dim() const { return static_cast<int>(k_x_.rows()); }

private:
    CMatrix k_x_;
};

// Circularly symmetric unit-variance Gaussian entries drawn from `rng`.
template <typename Rng>
ChannelSample draw_rayleigh(int m, int n, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ChannelSample s{CMatrix(n, m)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            s.h(i, j) = {re, im};
        }
    return s;
}

// Sample i is drawn from stream_rng(seed, i), so the ensemble does not depend on `workers`.
std::vector<ChannelSample> sample_rayleigh(int m, int n, std::size_t count, std::uint64_t seed,
                                           unsigned workers = 1);

// K_z^{-1/2} H
CMatrix whiten(const ChannelSample& h, const NoiseCovariance& kz);

// CSV: index, then row-major entries of H as re/im pairs.
void write_ensemble_csv(std::ostream& out, std::span<const ChannelSample> samples);
std::vector<ChannelSample> read_ensemble_csv(std::istream& in, int m, int n);

} // namespace cogmimo
