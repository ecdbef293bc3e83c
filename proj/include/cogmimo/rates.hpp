// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include "cogmimo/channel.hpp"
#include "cogmimo/config.hpp"

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace cogmimo {

enum class CovarianceMode { uniform, waterfill, beamform };

std::string_view to_string(CovarianceMode mode);
CovarianceMode parse_covariance_mode(std::string_view name);

inline constexpr double kZeroModeTol = 1e-12; // relative to the largest eigenvalue
inline constexpr double kTieTol = 1e-9;       // top-eigenvalue ties, relative

// B log2 det(I + weight H K_x H^H), optionally right-multiplied by K_z^{-1}.
double log_det_rate(const ChannelSample& h, const InputCovariance& k_x, double weight,
                    double bandwidth);
double log_det_rate(const ChannelSample& h, const InputCovariance& k_x, double weight,
                    double bandwidth, const CMatrix& kz_inv);

// Maximizes sum log(1 + p_i g_i) subject to sum p_i = total.
std::vector<double> waterfill(std::span<const double> gains, double total);

InputCovariance capacity_covariance(const ChannelSample& h, double weight);
InputCovariance capacity_covariance(const ChannelSample& h, double weight, const CMatrix& kz_inv);

// Uniform over the eigenvectors tied for the largest eigenvalue.
InputCovariance beamforming_covariance(const ChannelSample& h);
InputCovariance beamforming_covariance(const ChannelSample& h, const CMatrix& kz_inv);

struct TopEigen {
    double value = 0;
    int multiplicity = 0;
};

// Largest entry of a descending list and how many entries tie with it.
TopEigen top_eigen(std::span<const double> descending);

// Descending eigenvalues with roundoff-level modes set to zero.
std::vector<double> gram_spectrum(const CMatrix& gram);

// B sum log2(1 + weight p_i lambda_i) for the allocation `mode` picks on a Gram spectrum.
double spectral_rate(std::span<const double> eigenvalues, double weight, CovarianceMode mode,
                     double bandwidth);

struct ScenarioRates {
    double r1 = 0;
    double r2 = 0;
    std::array<double, 4> c{}; // C1..C4
};

ScenarioRates scenario_rates(const ChannelSample& h, const NoiseCovariance& kz,
                             const PowerPolicy& policy, const SystemConfig& config,
                             CovarianceMode mode);

/// Gram spectra of every sample: H^H K_z^{-1} H (busy) and H^H H (idle).
class SpectralEnsemble {
public:
    SpectralEnsemble(std::span<const ChannelSample> samples, const NoiseCovariance& kz,
                     unsigned workers = 1);

    std::size_t size() const { return count_; }
    int tx_antennas() const { return m_; }
    int rx_antennas() const { return n_; }

    std::span<const double> busy(std::size_t i) const
    {
        return {busy_.data() + i * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
    }
    std::span<const double> idle(std::size_t i) const
    {
        return {idle_.data() + i * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
    }

private:
    std::size_t count_ = 0;
    int m_ = 0;
    int n_ = 0;
    std::vector<double> busy_;
    std::vector<double> idle_;
};

} // namespace cogmimo
