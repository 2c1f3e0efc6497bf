#pragma once

// Dense Hermitian eigendecomposition, Kronecker products and Gauss-Hermite
// quadrature. The conventions pinned here are relied on everywhere else:
// eigenvalues ascending, eigenvector phase deterministic (first significant
// component real positive), quadrature weights normalized to sum to one.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qcrit/types.hpp"

namespace qcrit {

using Complex = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? 0.0 : a.derived().cwiseAbs().maxCoeff();
}

template <typename Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& a) {
  const DenseMatrix<typename Derived::Scalar> m = a.derived();
  return max_abs(m - m.adjoint().eval());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a,
                  double tol_rel = default_tolerances.hermiticity) {
  if (a.rows() != a.cols()) return false;
  const double scale = max_abs(a);
  return hermiticity_residual(a) <= tol_rel * (scale > 0.0 ? scale : 1.0);
}

// Eigendecomposition of a Hermitian matrix: ascending eigenvalues,
// orthonormal eigenvector columns with a deterministic phase.
template <typename Scalar>
struct EigenDecomposition {
  Eigen::VectorXd values;
  DenseMatrix<Scalar> vectors;
};

namespace detail {

// Rotate each column so that its first component above a relative threshold
// becomes real positive. Makes repeated runs bit-identical.
template <typename Scalar>
void fix_eigenvector_phases(DenseMatrix<Scalar>& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const double scale = v.col(c).cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      const double m = std::abs(v(r, c));
      if (m > 1e-8 * scale) {
        v.col(c) *= Eigen::numext::conj(v(r, c)) / m;
        break;
      }
    }
  }
}

}  // namespace detail

template <typename Derived>
EigenDecomposition<typename Derived::Scalar> hermitian_eig(
    const Eigen::MatrixBase<Derived>& a,
    double tol_rel = default_tolerances.hermiticity) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermitian_eig: matrix is not square");
  if (!is_hermitian(a, tol_rel))
    throw std::invalid_argument(
        "hermitian_eig: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(a.derived());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  EigenDecomposition<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};
  detail::fix_eigenvector_phases(out.vectors);
  return out;
}

// kron(A, B)[i*rB + k][j*cB + l] = A(i, j) * B(k, l)
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar =
      decltype(typename DerivedA::Scalar{} * typename DerivedB::Scalar{});
  DenseMatrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived();
  return out;
}

// Quadrature rule for expectations against a Gaussian density with the given
// mean and standard deviation: sum_i w_i f(x_i) ~ E[f], exact for polynomials
// of degree <= 2*order - 1. sigma == 0 collapses to a point mass at the mean.
struct QuadratureRule {
  Eigen::VectorXd nodes;    // parameter units, symmetric about the mean
  Eigen::VectorXd weights;  // dimensionless, sum to one
};

QuadratureRule gauss_hermite(int order, double mean, double sigma);

}  // namespace qcrit
