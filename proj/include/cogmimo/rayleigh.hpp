// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include "cogmimo/config.hpp"
#include "cogmimo/effcap.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace cogmimo {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

// n-point Gauss-Laguerre rule for weight e^{-z} on [0, inf); cached per order.
const QuadratureRule& gauss_laguerre(int order);

/// Parameters of the k x k moment matrix for i.i.d. Rayleigh H with uniform power.
struct HankelSpec {
    int k = 1;               // min(M, N)
    int d = 0;               // max(M, N) - min(M, N)
    double exponent = 0;     // theta T B log2(e)
    double snr_arg = 0;      // SNR fed to the kernel
    double antenna_ratio = 1; // N / M
};

HankelSpec make_hankel_spec(const SystemConfig& config, double snr_arg);

// int_0^inf (1 + ratio snr z)^(-exponent) z^(m+n+d-2) e^(-z) dz, 1-based m, n.
double hankel_entry(const HankelSpec& spec, int m, int n);

Eigen::MatrixXd hankel_matrix(const HankelSpec& spec);

// det G / prod Gamma(d+i) Gamma(i) = E[exp(-theta T rate)] at SNR snr_arg.
double rayleigh_mgf(const HankelSpec& spec);

// Requires a + b = 1 and the default interference covariance.
double closed_form_effective_rate(const SystemConfig& config, const SensingModel& sensing,
                                  const ActivityModel& activity, const PowerPolicy& policy,
                                  Normalization norm = Normalization::per_hz);

} // namespace cogmimo
