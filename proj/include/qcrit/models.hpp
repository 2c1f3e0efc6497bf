#pragma once

// Ground states and parameter derivatives for the three probe models:
// the transverse-field Ising chain in its free-fermion momentum-block form,
// the Lipkin-Meshkov-Glick model in the collective-spin basis, and the
// Landau-Zener two-level system.

#include <Eigen/Dense>

#include <vector>

#include "qcrit/numerics.hpp"
#include "qcrit/types.hpp"

namespace qcrit {

// ---------------------------------------------------------------------------
// Transverse-field Ising chain (periodic, even N), momentum blocks k > 0.
// ---------------------------------------------------------------------------

struct TfimParams {
  double omega = 1.0;  // transverse field, energy units, > 0
  double g = 0.0;      // coupling, energy units, any sign
  int n_spins = 2;     // even, >= 2
  void validate() const;
};

// Product ground state over the N/2 positive-momentum two-level blocks,
// |psi>_k = cos(theta_k/2)|0>_k + sin(theta_k/2)|1>_k.
struct TfimGroundState {
  Eigen::VectorXd momenta;  // k = pi(2n+1)/N, ascending, in (0, pi)
  Eigen::VectorXd thetas;   // block angle in (-pi, pi]
};

// Momentum grid k = pi(2n+1)/N, n = 0 .. N/2-1.
Eigen::VectorXd tfim_momenta(int n_spins);

// Block angle from tan(theta_k) = g sin k / (g cos k - omega), evaluated with
// a two-argument arctangent so the branch is continuous away from the
// singular point. Throws degenerate_error when both arguments vanish.
double tfim_theta(double omega, double g, double k);

// d(theta_k)/d(omega) = g sin k / D and d(theta_k)/dg = -omega sin k / D with
// D = g^2 + omega^2 - 2 g omega cos k. Throws singular_point_error at D = 0.
double tfim_theta_grad(double omega, double g, double k, ParameterId wrt);

// Block ground energy -2 sqrt(D); never positive.
double tfim_block_energy(double omega, double g, double k);

TfimGroundState tfim_ground_state(const TfimParams& p);

// All block-angle derivatives for one parameter point.
Eigen::VectorXd tfim_theta_grads(const TfimParams& p, ParameterId wrt);

// <a|b> = prod_k cos((theta_k^a - theta_k^b)/2); requires equal grids.
double tfim_overlap(const TfimGroundState& a, const TfimGroundState& b);

// Inner products between two sampled product states and their
// omega-derivatives, reduced blockwise: each quantity is a sum of products
// with at most one block replaced by its derivative, evaluated by a single
// pass so no division by small block overlaps occurs. tau_* are the
// d(theta)/d(omega) vectors of the two states.
struct TfimPairOverlaps {
  double psi_psi;    // <a|b>
  double dpsi_psi;   // <da|b>
  double psi_dpsi;   // <a|db>
  double dpsi_dpsi;  // <da|db>
};
TfimPairOverlaps tfim_pair_overlaps(const TfimGroundState& a,
                                    const TfimGroundState& b,
                                    const Eigen::VectorXd& tau_a,
                                    const Eigen::VectorXd& tau_b);

// Dense 2^(N/2) state vector; block 0 is the most significant index.
Eigen::VectorXd tfim_state_vector(const TfimGroundState& s);

// Dense product-rule derivative of the state vector for the given block-angle
// derivatives tau.
Eigen::VectorXd tfim_state_grad_vector(const TfimGroundState& s,
                                       const Eigen::VectorXd& tau);

// ---------------------------------------------------------------------------
// Lipkin-Meshkov-Glick model, H = omega S_z - (g/N) S_x^2 in the maximal-spin
// sector S = N/2, basis |S, m> with m ascending from -S to S.
// ---------------------------------------------------------------------------

struct LmgParams {
  double omega = 1.0;  // > 0
  double g = 0.0;
  int n_spins = 2;  // >= 2
  void validate() const;
};

struct LmgGroundState {
  Eigen::VectorXd amplitudes;  // unit norm, largest component real positive
  double energy = 0.0;
  double gap = 0.0;            // E1 - E0 over the full spectrum
  bool near_degenerate = false;  // gap below degeneracy_rel * ||H||
};

// Dense (N+1) x (N+1) real-symmetric matrix of H in the |S, m> basis.
Eigen::MatrixXd lmg_hamiltonian(const LmgParams& p);

// Solved eigensystem kept around so the ground state and its perturbative
// parameter derivatives share one diagonalization. S_x^2 couples m to m +/- 2
// only, so H splits into two parity sectors that are tridiagonal in the
// sector-local index; the ground state is computed sector-pure, which keeps it
// well defined when the two sectors become quasi-degenerate deep in the
// broken phase.
class LmgEigenSystem {
 public:
  explicit LmgEigenSystem(const LmgParams& p,
                          const Tolerances& tol = default_tolerances);

  const LmgParams& params() const { return params_; }
  const LmgGroundState& ground() const { return ground_; }
  double spectral_norm() const { return h_norm_; }

  // Smallest excitation gap among states actually coupled to the ground state
  // by dH/d(omega) and dH/dg (both preserve parity, so this is the gap within
  // the ground sector). The full even/odd splitting can close exponentially
  // in N while this stays healthy.
  double coupled_gap() const { return coupled_gap_; }

  // First-order perturbative derivative of the ground state,
  // sum_{n>0} |n><n|dH|0> / (E0 - En); orthogonal to the ground state by
  // construction. Throws near_degenerate_error when coupled_gap() is below
  // degeneracy_rel * ||H||.
  Eigen::VectorXd gradient(ParameterId wrt) const;

 private:
  LmgParams params_;
  Tolerances tol_;
  std::vector<int> sector_index_;   // global basis indices of ground sector
  Eigen::VectorXd sector_values_;   // eigenvalues of ground sector, ascending
  Eigen::MatrixXd sector_vectors_;  // sector-local eigenvectors
  double coupled_gap_ = 0.0;
  double h_norm_ = 0.0;
  LmgGroundState ground_;
};

LmgGroundState lmg_ground_state(const LmgParams& p);
Eigen::VectorXd lmg_ground_state_grad(const LmgParams& p, ParameterId wrt);

// ---------------------------------------------------------------------------
// Landau-Zener two-level probe, H = (omega/2) sigma_z - (g/2) sigma_x.
// States are written in the sigma_x eigenbasis: component 0 multiplies the
// +1 eigenvector of sigma_x, component 1 the -1 eigenvector. In this frame
// sigma_x = diag(1, -1), sigma_z = [[0, 1], [1, 0]] and the Hamiltonian
// matrix is [[-g, omega], [omega, g]] / 2.
// ---------------------------------------------------------------------------

struct LzParams {
  double omega = 1.0;  // > 0
  double g = 0.0;
  void validate() const;
};

// Normalized instantaneous ground state,
//   component 0 = -(g + r) / sqrt(2 g (g + r) + 2 omega^2),
//   component 1 =  omega   / sqrt(2 g (g + r) + 2 omega^2),
// with r = sqrt(omega^2 + g^2). Equivalently (-cos(chi/2), sin(chi/2)) with
// chi = atan2(omega, g).
Eigen::Vector2d lz_ground_state(const LzParams& p);

// Closed-form parameter derivative of the ground state components.
Eigen::Vector2d lz_ground_state_grad(const LzParams& p, ParameterId wrt);

}  // namespace qcrit
