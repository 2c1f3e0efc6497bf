#pragma once

// Gaussian-averaged ground-state mixtures: the probe state when the coupling
// g is only known to lie in a Gaussian window, and the QFI of that averaged
// state with respect to omega. A dense reference path covers all three
// models; a low-rank fast path exploits the TFIM product structure so system
// sizes far beyond the dense cap remain reachable.

#include <Eigen/Dense>

#include <variant>

#include "qcrit/models.hpp"
#include "qcrit/qfi.hpp"
#include "qcrit/types.hpp"

namespace qcrit {

enum class ProbeModel { Lz, Tfim, Lmg };

const char* to_string(ProbeModel m);

// Probe instance the averaging operates on; n_spins is ignored for Lz.
struct ModelConfig {
  ProbeModel model = ProbeModel::Tfim;
  double omega = 1.0;
  int n_spins = 2;
  void validate() const;
};

// Gaussian distribution of the coupling: mean, standard deviation, and the
// Gauss-Hermite order used to discretize it. sigma == 0 is a point mass.
struct GaussianBelief {
  double mean = 1.0;
  double sigma = 0.0;
  int nodes = 64;
  void validate() const;
};

// Averaged state in the full model basis, rho = sum_m w_m |psi_m><psi_m|,
// together with its omega-derivative assembled from analytic state gradients.
struct DenseAveragedState {
  SpectralState<double> state;
  Eigen::MatrixXd drho_omega;
};

// Averaged state represented on the orthonormalized span of the sampled
// states and their omega-derivatives. `combo` maps the raw sampled vectors
// (norm-scaled) to the orthonormal basis; rho and drho_omega are the matrix
// representations in that basis.
struct LowRankAveragedState {
  Eigen::MatrixXd combo;       // kept raw vectors x basis rank
  Eigen::MatrixXd gram;        // Gram matrix of the kept raw vectors
  Eigen::MatrixXd rho;         // basis rank x basis rank
  Eigen::MatrixXd drho_omega;  // basis rank x basis rank
  int dropped_directions = 0;  // Gram directions below the truncation cutoff
  double ortho_residual = 0.0; // max|C^T S C - I|
};

using AveragedState = std::variant<DenseAveragedState, LowRankAveragedState>;

// Dense path; caps: TFIM N <= 22 (dimension 2^(N/2)), LMG N <= 4000.
DenseAveragedState averaged_state_dense(
    const ModelConfig& config, const GaussianBelief& belief,
    const Tolerances& tol = default_tolerances);

// Low-rank path, TFIM only. Pairwise overlaps are evaluated blockwise, the
// Gram matrix is eigendecomposed and directions below
// gram_truncation * max eigenvalue are dropped.
LowRankAveragedState averaged_state_lowrank(
    const ModelConfig& config, const GaussianBelief& belief,
    const Tolerances& tol = default_tolerances);

// QFI of the averaged state with respect to omega (dense reference path).
double averaged_qfi(const ModelConfig& config, const GaussianBelief& belief,
                    const Tolerances& tol = default_tolerances);

// Same quantity through the low-rank representation; equals the dense value
// within 1e-8 relative wherever both run.
double averaged_qfi_lowrank(const ModelConfig& config,
                            const GaussianBelief& belief,
                            const Tolerances& tol = default_tolerances);

// Quadrature-doubling convergence probe: recompute with twice the nodes and
// report the relative change.
struct ConvergenceCheck {
  double value = 0.0;
  double value_doubled = 0.0;
  double rel_change = 0.0;
  bool converged = false;
};
ConvergenceCheck averaged_qfi_convergence(
    const ModelConfig& config, const GaussianBelief& belief,
    const Tolerances& tol = default_tolerances);

}  // namespace qcrit
