#pragma once

// Fisher-information machinery: pure-state and mixed-state QFIM entries,
// Cramer-Rao bounds, singularity detection, and the closed-form QFIMs of the
// three probe models.

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "qcrit/models.hpp"
#include "qcrit/numerics.hpp"
#include "qcrit/types.hpp"

namespace qcrit {

// Symmetric 2x2 Fisher-information matrix for the parameter pair (omega, g);
// entries carry units 1/energy^2.
struct QfiMatrix {
  double i_oo = 0.0;
  double i_og = 0.0;
  double i_gg = 0.0;
};

inline double qfim_det(const QfiMatrix& m) {
  return m.i_oo * m.i_gg - m.i_og * m.i_og;
}

inline bool is_singular(const QfiMatrix& m,
                        double tol_rel = default_tolerances.singularity_rel) {
  const double scale = m.i_oo * m.i_gg + m.i_og * m.i_og;
  return qfim_det(m) <= tol_rel * scale;
}

// Attainable variance bound for one parameter when the other is unknown,
// I_bb / det. A singular matrix is a legitimate physical outcome and is
// reported as +infinity rather than an error.
inline double crb_variance(const QfiMatrix& m, ParameterId target,
                           double tol_rel = default_tolerances.singularity_rel) {
  if (is_singular(m, tol_rel)) return std::numeric_limits<double>::infinity();
  const double other = target == ParameterId::Omega ? m.i_gg : m.i_oo;
  return other / qfim_det(m);
}

// QFIM entry of a pure state, 4 Re[<da|db> - <da|psi><psi|db>].
template <typename D1, typename D2, typename D3>
double qfim_pure(const Eigen::MatrixBase<D1>& psi,
                 const Eigen::MatrixBase<D2>& dpsi_a,
                 const Eigen::MatrixBase<D3>& dpsi_b,
                 double norm_tol = default_tolerances.state_norm) {
  if (std::abs(psi.norm() - 1.0) > norm_tol)
    throw std::invalid_argument("qfim_pure: state is not normalized");
  const auto t1 = dpsi_a.dot(dpsi_b.derived());
  const auto t2 = dpsi_a.dot(psi.derived()) * psi.dot(dpsi_b.derived());
  return 4.0 * Eigen::numext::real(t1 - t2);
}

// Density matrix held in spectral form; eigenvalues are probabilities clipped
// to [0, 1]. Pairs with lambda_i + lambda_j <= rank_tolerance are excluded
// from the mixed-state QFIM sum.
template <typename Scalar>
struct SpectralState {
  EigenDecomposition<Scalar> eigen;
  double rank_tolerance = default_tolerances.rank_cutoff;
};

template <typename Derived>
SpectralState<typename Derived::Scalar> make_spectral_state(
    const Eigen::MatrixBase<Derived>& rho,
    const Tolerances& tol = default_tolerances) {
  SpectralState<typename Derived::Scalar> st{hermitian_eig(rho, tol.hermiticity),
                                             tol.rank_cutoff};
  if (st.eigen.values.minCoeff() < -tol.density_floor)
    throw std::invalid_argument(
        "make_spectral_state: eigenvalue below admissible negativity");
  if (std::abs(st.eigen.values.sum() - 1.0) > tol.trace_unit)
    throw std::invalid_argument("make_spectral_state: trace is not one");
  st.eigen.values = st.eigen.values.cwiseMax(0.0).cwiseMin(1.0);
  return st;
}

// Mixed-state QFIM entry,
//   sum_{ij} 2 Re[<i|drho_a|j><j|drho_b|i>] / (lambda_i + lambda_j),
// evaluated through the congruence A = V^dag drho V so the double sum runs
// over precomputed matrix elements (O(d^3) instead of O(d^4)).
template <typename Scalar, typename D1, typename D2>
double qfim_mixed(const SpectralState<Scalar>& st,
                  const Eigen::MatrixBase<D1>& drho_a,
                  const Eigen::MatrixBase<D2>& drho_b,
                  const Tolerances& tol = default_tolerances) {
  const Eigen::Index d = st.eigen.values.size();
  if (drho_a.rows() != d || drho_a.cols() != d || drho_b.rows() != d ||
      drho_b.cols() != d)
    throw std::invalid_argument("qfim_mixed: dimension mismatch");
  if (!is_hermitian(drho_a, tol.hermiticity) ||
      !is_hermitian(drho_b, tol.hermiticity))
    throw std::invalid_argument("qfim_mixed: derivative is not Hermitian");
  const DenseMatrix<Scalar>& v = st.eigen.vectors;
  const DenseMatrix<Scalar> a = v.adjoint() * drho_a.derived() * v;
  const DenseMatrix<Scalar> b = v.adjoint() * drho_b.derived() * v;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double s = st.eigen.values[i] + st.eigen.values[j];
      if (s > st.rank_tolerance)
        sum += 2.0 * Eigen::numext::real(a(i, j) * b(j, i)) / s;
    }
  return sum;
}

template <typename Scalar, typename D1>
double qfim_mixed(const SpectralState<Scalar>& st,
                  const Eigen::MatrixBase<D1>& drho,
                  const Tolerances& tol = default_tolerances) {
  return qfim_mixed(st, drho, drho, tol);
}

// Closed-form TFIM QFIM: momentum sums of
//   [g^2, -g w, w^2] sin^2(k) / (g^2 + w^2 - 2 g w cos k)^2
// over k = pi(2n+1)/N. Singular for every N.
QfiMatrix tfim_qfim_closed(const TfimParams& p);

// Same matrix assembled from per-block pure-state QFI with analytic angle
// gradients; agrees with the closed form to rounding.
QfiMatrix tfim_qfim_numeric(const TfimParams& p);

// Landau-Zener QFIM, entries [g^2, -g w, w^2] / (g^2 + w^2)^2.
QfiMatrix lz_qfim_closed(const LzParams& p);

// Thermodynamic-limit LMG QFIM from the squeezing parameter
// xi = ln(1 - g/omega)/4: I = 2 [dxi][dxi]^T. Real only for g < omega.
QfiMatrix lmg_thermo_qfim(double omega, double g);

// Finite-N LMG QFIM from the numerical ground state and its perturbative
// gradients.
QfiMatrix lmg_qfim_numeric(const LmgParams& p);

}  // namespace qcrit
