// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace cogmimo {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Matrix<std::complex<double>>;

inline constexpr double kHermitianTol = 1e-10;

template <typename Scalar>
struct HermitianEigen {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    Vector<Real> values;    // descending
    Matrix<Scalar> vectors; // orthonormal columns, same order as values
};

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = kHermitianTol)
{
    if (a.rows() != a.cols())
        return false;
    if (a.size() == 0)
        return true;
    const double scale = std::max(1.0, static_cast<double>(a.cwiseAbs().maxCoeff()));
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
template <typename Derived>
HermitianEigen<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& a)
{
    using Scalar = typename Derived::Scalar;
    if (!is_hermitian(a))
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
    const Matrix<Scalar> sym = (a + a.adjoint()) / 2;
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    HermitianEigen<Scalar> out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

// Eigenvalues only, descending; the caller guarantees the input is Hermitian.
template <typename Derived>
Vector<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& a)
{
    using Scalar = typename Derived::Scalar;
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(a.derived(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().reverse();
}

// U f(Lambda) U^H for a Hermitian decomposition.
template <typename Scalar, typename Fn>
Matrix<Scalar> spectral_map(const HermitianEigen<Scalar>& eig, Fn&& fn)
{
    Vector<Scalar> mapped(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        mapped(i) = Scalar(fn(eig.values(i)));
    return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

// log2 det of a Hermitian positive-definite matrix via Cholesky.
template <typename Derived>
double log2_det_hpd(const Eigen::MatrixBase<Derived>& a)
{
    using Scalar = typename Derived::Scalar;
    Eigen::LLT<Matrix<Scalar>> llt(a.derived());
    if (llt.info() != Eigen::Success)
        throw std::domain_error("log2_det_hpd: matrix is not positive definite");
    const auto diag = llt.matrixLLT().diagonal();
    double acc = 0;
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        acc += std::log2(std::real(diag(i)));
    return 2 * acc;
}

} // namespace cogmimo
