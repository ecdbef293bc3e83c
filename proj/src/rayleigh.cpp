// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cogmimo/rayleigh.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>

namespace cogmimo {

namespace {

constexpr double kAgreeTol = 1e-10;
constexpr std::array<int, 5> kLadder = {32, 64, 128, 256, 512};

QuadratureRule build_gauss_laguerre(int n)
{
    // Golub-Welsch on the Laguerre Jacobi matrix
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    for (int i = 0; i < n; ++i)
        diag(i) = 2.0 * i + 1.0;
    for (int i = 1; i < n; ++i)
        sub(i - 1) = i;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw QuadratureError("Gauss-Laguerre rule construction failed");
    QuadratureRule rule;
    rule.nodes = solver.eigenvalues();
    rule.weights = solver.eigenvectors().row(0).transpose().array().square();
    return rule;
}

// Gamma at integer arguments: exact products while they fit a double
double factorial(int p)
{
    if (p > 170)
        throw std::overflow_error("factorial argument too large");
    double out = 1;
    for (int i = 2; i <= p; ++i)
        out *= i;
    return out;
}

double log_factorial(int p) { return std::log(factorial(p)); }

// sum_i w_i exp(log_f(x_i)); non-finite terms are underflow and count as zero
template <typename LogF>
double apply_rule(const QuadratureRule& rule, LogF&& log_f)
{
    double acc = 0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
        if (rule.weights(i) == 0)
            continue;
        const double term = rule.weights(i) * std::exp(log_f(rule.nodes(i)));
        if (std::isfinite(term))
            acc += term;
    }
    return acc;
}

template <typename LogF>
std::optional<double> ladder(LogF&& log_f)
{
    double prev = apply_rule(gauss_laguerre(kLadder[0]), log_f);
    for (std::size_t i = 1; i < kLadder.size(); ++i) {
        const double cur = apply_rule(gauss_laguerre(kLadder[i]), log_f);
        if (std::abs(cur - prev) <= kAgreeTol * std::abs(cur))
            return cur;
        prev = cur;
    }
    return std::nullopt;
}

double kernel_integral(double c, double s, int p)
{
    if (c == 0 || s == 0)
        return factorial(p);

    // direct: weight e^{-z}, integrand (1 + c z)^{-s} z^p
    auto direct = [&](double z) { return -s * std::log1p(c * z) + p * std::log(z); };
    if (auto v = ladder(direct))
        return *v;

    // substitute (1 + c z)^{-s} = e^{-v}, so the steep factor becomes the weight
    auto mapped = [&](double v) {
        const double t = v / s;
        const double log_z = t + std::log(-std::expm1(-t)) - std::log(c);
        const double z = std::exp(log_z);
        return p * log_z - z + t - std::log(c * s);
    };
    if (auto v = ladder(mapped))
        return *v;

    // adaptive double-exponential quadrature as the last resort
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [&](double z) {
        const double lf = -s * std::log1p(c * z) + (p > 0 ? p * std::log(z) : 0.0) - z;
        return std::exp(lf);
    };
    double err = 0, l1 = 0;
    const double value = integrator.integrate(f, 1e-13, &err, &l1);
    if (std::isfinite(value) && err <= 1e-9 * std::abs(value))
        return value;
    throw QuadratureError("kernel integral did not converge (c=" + std::to_string(c) +
                          ", s=" + std::to_string(s) + ", p=" + std::to_string(p) + ")");
}

// Hankel determinant of the kernel measure z^d (1 + c z)^{-s} e^{-z} dz as the product of the
// squared norms of its monic orthogonal polynomials (discretized Stieltjes). Stable where the
// moment matrix is too ill-conditioned for elimination.
std::optional<double> stieltjes_log_det(const QuadratureRule& rule, double c, double s, int d,
                                        int k, bool mapped)
{
    const Eigen::Index n = rule.nodes.size();
    Eigen::ArrayXd z(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double log_w;
        if (mapped) {
            const double t = rule.nodes(i) / s;
            const double log_z = t + std::log(-std::expm1(-t)) - std::log(c);
            z(i) = std::exp(log_z);
            log_w = d * log_z - z(i) + t - std::log(c * s);
        } else {
            z(i) = rule.nodes(i);
            log_w = -s * std::log1p(c * z(i)) + d * std::log(z(i));
        }
        const double wi = rule.weights(i) * std::exp(log_w);
        w(i) = std::isfinite(wi) ? wi : 0.0;
    }
    Eigen::ArrayXd prev = Eigen::ArrayXd::Zero(n), cur = Eigen::ArrayXd::Ones(n);
    double norm_prev = 1, log_det = 0;
    for (int j = 0; j < k; ++j) {
        const double norm = (w * cur.square()).sum();
        if (!(norm > 0) || !std::isfinite(norm))
            return std::nullopt;
        log_det += std::log(norm);
        const double alpha = (w * z * cur.square()).sum() / norm;
        const double beta = j == 0 ? 0.0 : norm / norm_prev;
        Eigen::ArrayXd next = (z - alpha) * cur - beta * prev;
        prev = std::move(cur);
        cur = std::move(next);
        norm_prev = norm;
    }
    return log_det;
}

std::optional<double> stieltjes_ladder(double c, double s, int d, int k, bool mapped)
{
    std::optional<double> prev;
    for (int order : kLadder) {
        const auto cur = stieltjes_log_det(gauss_laguerre(order), c, s, d, k, mapped);
        if (cur && prev && std::abs(*cur - *prev) <= kAgreeTol * std::max(1.0, std::abs(*cur)))
            return cur;
        prev = cur;
    }
    return std::nullopt;
}

double log_hankel_det_stable(const HankelSpec& spec)
{
    const double c = spec.antenna_ratio * spec.snr_arg, s = spec.exponent;
    if (auto v = stieltjes_ladder(c, s, spec.d, spec.k, false))
        return *v;
    if (auto v = stieltjes_ladder(c, s, spec.d, spec.k, true))
        return *v;
    throw QuadratureError("Hankel determinant did not converge");
}

// below this the eliminated determinant has lost most of its significant digits
constexpr double kConditioningFloor = 1e-6;

} // namespace

const QuadratureRule& gauss_laguerre(int order)
{
    if (order < 1)
        throw std::invalid_argument("gauss_laguerre: order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[order];
    if (!slot)
        slot = std::make_unique<QuadratureRule>(build_gauss_laguerre(order));
    return *slot;
}

HankelSpec make_hankel_spec(const SystemConfig& config, double snr_arg)
{
    HankelSpec spec;
    spec.k = std::min(config.tx_antennas(), config.rx_antennas());
    spec.d = std::abs(config.tx_antennas() - config.rx_antennas());
    spec.exponent = config.theta() * config.frame_duration() * config.bandwidth() / std::numbers::ln2;
    spec.snr_arg = snr_arg;
    spec.antenna_ratio = static_cast<double>(config.rx_antennas()) / config.tx_antennas();
    return spec;
}

double hankel_entry(const HankelSpec& spec, int m, int n)
{
    if (spec.k < 1 || spec.d < 0 || !(spec.exponent >= 0) || !(spec.snr_arg >= 0))
        throw std::invalid_argument("hankel_entry: invalid Hankel parameters");
    if (m < 1 || n < 1 || m > spec.k || n > spec.k)
        throw std::invalid_argument("hankel_entry: index out of range");
    return kernel_integral(spec.antenna_ratio * spec.snr_arg, spec.exponent, m + n + spec.d - 2);
}

Eigen::MatrixXd hankel_matrix(const HankelSpec& spec)
{
    // entries depend on m + n only
    std::vector<double> diagonals(2 * spec.k - 1);
    for (int s = 0; s < 2 * spec.k - 1; ++s)
        diagonals[s] = hankel_entry(spec, 1 + s / 2, 1 + s - s / 2);
    Eigen::MatrixXd g(spec.k, spec.k);
    for (int i = 0; i < spec.k; ++i)
        for (int j = 0; j < spec.k; ++j)
            g(i, j) = diagonals[i + j];
    return g;
}

double rayleigh_mgf(const HankelSpec& spec)
{
    const Eigen::MatrixXd g = hankel_matrix(spec);
    // symmetric scaling keeps the LU well conditioned
    const Eigen::VectorXd scale = g.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = scale.asDiagonal() * g * scale.asDiagonal();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(scaled);
    const double det_scaled = lu.determinant();
    double log_norm = 0;
    for (int i = 0; i < spec.k; ++i)
        log_norm += std::log(g(i, i));
    for (int i = 1; i <= spec.k; ++i)
        log_norm -= log_factorial(spec.d + i - 1) + log_factorial(i - 1);
    if (det_scaled < -1e-10)
        throw QuadratureError("moment determinant is negative");
    double log_det = std::log(std::max(det_scaled, 0.0)) + log_norm;
    if (det_scaled < kConditioningFloor && spec.exponent > 0 && spec.snr_arg > 0) {
        log_det = log_hankel_det_stable(spec);
        for (int i = 1; i <= spec.k; ++i)
            log_det -= log_factorial(spec.d + i - 1) + log_factorial(i - 1);
    }
    return std::min(std::exp(log_det), 1.0);
}

double closed_form_effective_rate(const SystemConfig& config, const SensingModel& sensing,
                                  const ActivityModel& activity, const PowerPolicy& policy,
                                  Normalization norm)
{
    if (!activity.memoryless())
        throw std::invalid_argument("closed-form effective rate needs a + b = 1");
    if (!(config.theta() > 0))
        throw std::invalid_argument("closed-form effective rate needs theta > 0");
    const TransitionModel tm(activity, sensing);
    const double snr = snr_of(policy.p2(), config);
    const double sn2 = config.noise_variance(), ss2 = config.interference_variance();
    const double busy_snr = policy.mu() * sn2 * snr / (ss2 + sn2);
    const double mgf_busy = rayleigh_mgf(make_hankel_spec(config, busy_snr));
    const double mgf_idle = rayleigh_mgf(make_hankel_spec(config, snr));
    const double inner = tm.busy_detect_weight() * mgf_busy + tm.idle_detect_weight() * mgf_idle +
                         tm.off_weight();
    const double dims = norm == Normalization::per_dimension ? config.rx_antennas() : 1.0;
    return -std::log(std::min(inner, 1.0)) /
           (config.theta() * config.frame_duration() * config.bandwidth() * dims);
}

} // namespace cogmimo
