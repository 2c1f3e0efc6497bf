#include "qcrit/uncertainty.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace qcrit {

const char* to_string(ProbeModel m) {
  switch (m) {
    case ProbeModel::Lz: return "lz";
    case ProbeModel::Tfim: return "tfim";
    case ProbeModel::Lmg: return "lmg";
  }
  return "?";
}

void ModelConfig::validate() const {
  if (!std::isfinite(omega) || omega <= 0.0)
    throw std::invalid_argument("ModelConfig: omega must be positive");
  if (model == ProbeModel::Tfim && (n_spins < 2 || n_spins % 2 != 0))
    throw std::invalid_argument("ModelConfig: TFIM needs even n_spins >= 2");
  if (model == ProbeModel::Lmg && n_spins < 2)
    throw std::invalid_argument("ModelConfig: LMG needs n_spins >= 2");
}

void GaussianBelief::validate() const {
  if (!std::isfinite(mean) || !std::isfinite(sigma) || sigma < 0.0)
    throw std::invalid_argument(
        "GaussianBelief: mean/sigma must be finite, sigma >= 0");
  if (nodes < 1)
    throw std::invalid_argument("GaussianBelief: nodes must be >= 1");
}

namespace {

// Ground states and their omega-derivatives at every quadrature node, in the
// full model basis.
struct SampledFamily {
  std::vector<Eigen::VectorXd> psi;
  std::vector<Eigen::VectorXd> dpsi;
  Eigen::VectorXd weights;
};

int dense_dimension(const ModelConfig& c) {
  switch (c.model) {
    case ProbeModel::Lz:
      return 2;
    case ProbeModel::Tfim:
      if (c.n_spins > 22)
        throw std::invalid_argument(
            "averaged_state_dense: TFIM dense path capped at N = 22");
      return 1 << (c.n_spins / 2);
    case ProbeModel::Lmg:
      if (c.n_spins > 4000)
        throw std::invalid_argument(
            "averaged_state_dense: LMG dense path capped at N = 4000");
      return c.n_spins + 1;
  }
  throw std::invalid_argument("averaged_state_dense: unknown model");
}

SampledFamily sample_dense(const ModelConfig& c, const QuadratureRule& rule,
                           const Tolerances& tol) {
  const int m = static_cast<int>(rule.nodes.size());
  SampledFamily fam;
  fam.psi.resize(m);
  fam.dpsi.resize(m);
  fam.weights = rule.weights;
  for (int i = 0; i < m; ++i) {
    const double g = rule.nodes[i];
    try {
      switch (c.model) {
        case ProbeModel::Lz: {
          const LzParams p{c.omega, g};
          fam.psi[i] = lz_ground_state(p);
          fam.dpsi[i] = lz_ground_state_grad(p, ParameterId::Omega);
          break;
        }
        case ProbeModel::Tfim: {
          const TfimParams p{c.omega, g, c.n_spins};
          const TfimGroundState gs = tfim_ground_state(p);
          const Eigen::VectorXd tau = tfim_theta_grads(p, ParameterId::Omega);
          fam.psi[i] = tfim_state_vector(gs);
          fam.dpsi[i] = tfim_state_grad_vector(gs, tau);
          break;
        }
        case ProbeModel::Lmg: {
          const LmgEigenSystem sys({c.omega, g, c.n_spins}, tol);
          fam.psi[i] = sys.ground().amplitudes;
          fam.dpsi[i] = sys.gradient(ParameterId::Omega);
          break;
        }
      }
    } catch (const std::exception& e) {
      throw node_error(i, e.what());
    }
  }
  return fam;
}

}  // namespace

DenseAveragedState averaged_state_dense(const ModelConfig& config,
                                        const GaussianBelief& belief,
                                        const Tolerances& tol) {
  config.validate();
  belief.validate();
  const int d = dense_dimension(config);
  const QuadratureRule rule =
      gauss_hermite(belief.nodes, belief.mean, belief.sigma);
  const SampledFamily fam = sample_dense(config, rule, tol);

  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd drho = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < fam.psi.size(); ++i) {
    rho.selfadjointView<Eigen::Lower>().rankUpdate(fam.psi[i], fam.weights[i]);
    drho.selfadjointView<Eigen::Lower>().rankUpdate(fam.dpsi[i], fam.psi[i],
                                                    fam.weights[i]);
  }
  rho = rho.selfadjointView<Eigen::Lower>();
  drho = drho.selfadjointView<Eigen::Lower>();
  return {make_spectral_state(rho, tol), std::move(drho)};
}

double averaged_qfi(const ModelConfig& config, const GaussianBelief& belief,
                    const Tolerances& tol) {
  const DenseAveragedState s = averaged_state_dense(config, belief, tol);
  return qfim_mixed(s.state, s.drho_omega, tol);
}

LowRankAveragedState averaged_state_lowrank(const ModelConfig& config,
                                            const GaussianBelief& belief,
                                            const Tolerances& tol) {
  config.validate();
  belief.validate();
  if (config.model != ProbeModel::Tfim)
    throw std::invalid_argument(
        "averaged_state_lowrank: requires the TFIM product structure");
  const QuadratureRule rule =
      gauss_hermite(belief.nodes, belief.mean, belief.sigma);
  const int m = static_cast<int>(rule.nodes.size());

  std::vector<TfimGroundState> gs(m);
  std::vector<Eigen::VectorXd> tau(m);
  for (int i = 0; i < m; ++i) {
    try {
      const TfimParams p{config.omega, rule.nodes[i], config.n_spins};
      gs[i] = tfim_ground_state(p);
      tau[i] = tfim_theta_grads(p, ParameterId::Omega);
    } catch (const std::exception& e) {
      throw node_error(i, e.what());
    }
  }

  // Raw vector set: psi_0..psi_{m-1}, dpsi_0..dpsi_{m-1}. All pairwise inner
  // products reduce to blockwise passes.
  const int raw = 2 * m;
  Eigen::MatrixXd s_full(raw, raw);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const TfimPairOverlaps o = tfim_pair_overlaps(gs[i], gs[j], tau[i], tau[j]);
      s_full(i, j) = s_full(j, i) = o.psi_psi;
      s_full(m + i, j) = o.dpsi_psi;
      s_full(j, m + i) = o.dpsi_psi;
      s_full(i, m + j) = o.psi_dpsi;
      s_full(m + j, i) = o.psi_dpsi;
      s_full(m + i, m + j) = s_full(m + j, m + i) = o.dpsi_dpsi;
    }

  // Keep every psi column; keep dpsi columns with nonzero norm (a zero
  // derivative contributes nothing and has no direction to orthonormalize).
  std::vector<int> kept;
  kept.reserve(raw);
  for (int i = 0; i < m; ++i) kept.push_back(i);
  for (int i = 0; i < m; ++i)
    if (s_full(m + i, m + i) > 0.0) kept.push_back(m + i);
  const int nk = static_cast<int>(kept.size());

  Eigen::VectorXd norms(nk);
  for (int i = 0; i < nk; ++i) norms[i] = std::sqrt(s_full(kept[i], kept[i]));

  Eigen::MatrixXd s_norm(nk, nk);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j)
      s_norm(i, j) = s_full(kept[i], kept[j]) / (norms[i] * norms[j]);
  s_norm = 0.5 * (s_norm + s_norm.transpose()).eval();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s_norm);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("averaged_state_lowrank: Gram eigensolve failed");
  const double mu_max = es.eigenvalues().maxCoeff();
  const double cutoff = tol.gram_truncation * (mu_max > 0.0 ? mu_max : 1.0);
  int first_kept = 0;
  while (first_kept < nk && es.eigenvalues()[first_kept] <= cutoff) ++first_kept;
  const int rank = nk - first_kept;
  if (rank == 0)
    throw std::runtime_error("averaged_state_lowrank: Gram matrix is null");

  // Canonical orthogonalization: e_p = sum_i x_i U(i, p) / sqrt(mu_p). The
  // Gram residual is measured in the natural normalization U^T S U - diag(mu)
  // relative to the Gram scale; in the 1/sqrt(mu)-scaled metric the same
  // quantity is swamped by rounding whenever the kept spectrum spans many
  // orders, while weighted observables remain accurate.
  const Eigen::MatrixXd u_kept = es.eigenvectors().rightCols(rank);
  const Eigen::VectorXd mu_kept = es.eigenvalues().tail(rank);
  Eigen::MatrixXd c(nk, rank);
  for (int p = 0; p < rank; ++p)
    c.col(p) = u_kept.col(p) / std::sqrt(mu_kept[p]);

  LowRankAveragedState out;
  out.dropped_directions = first_kept;
  const Eigen::MatrixXd gram_residual =
      u_kept.transpose() * s_norm * u_kept -
      Eigen::MatrixXd(mu_kept.asDiagonal());
  out.ortho_residual = gram_residual.cwiseAbs().maxCoeff() / mu_max;
  if (out.ortho_residual > tol.orthonormality)
    throw std::runtime_error(
        "averaged_state_lowrank: basis orthonormality residual too large");

  // Coordinates of the raw vectors in the orthonormal basis:
  // <e_p | x_col> = sum_i C(i, p) S(kept_i, col) / norm_i.
  Eigen::MatrixXd y_psi(nk, m), y_dpsi(nk, m);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < m; ++j) {
      y_psi(i, j) = s_full(kept[i], j) / norms[i];
      y_dpsi(i, j) = s_full(kept[i], m + j) / norms[i];
    }
  const Eigen::MatrixXd p_coords = c.transpose() * y_psi;   // rank x m
  const Eigen::MatrixXd q_coords = c.transpose() * y_dpsi;  // rank x m

  const auto w = rule.weights.asDiagonal();
  out.rho = p_coords * w * p_coords.transpose();
  out.drho_omega = q_coords * w * p_coords.transpose() +
                   p_coords * w * q_coords.transpose();
  out.rho = 0.5 * (out.rho + out.rho.transpose()).eval();
  out.drho_omega = 0.5 * (out.drho_omega + out.drho_omega.transpose()).eval();
  out.combo = std::move(c);
  out.gram = std::move(s_norm);

  if (std::abs(out.rho.trace() - 1.0) > tol.trace_unit)
    throw std::runtime_error("averaged_state_lowrank: trace deviates from one");
  return out;
}

double averaged_qfi_lowrank(const ModelConfig& config,
                            const GaussianBelief& belief,
                            const Tolerances& tol) {
  const LowRankAveragedState s = averaged_state_lowrank(config, belief, tol);
  const SpectralState<double> st = make_spectral_state(s.rho, tol);
  return qfim_mixed(st, s.drho_omega, tol);
}

ConvergenceCheck averaged_qfi_convergence(const ModelConfig& config,
                                          const GaussianBelief& belief,
                                          const Tolerances& tol) {
  const bool lowrank = config.model == ProbeModel::Tfim;
  GaussianBelief doubled = belief;
  doubled.nodes = 2 * belief.nodes;
  ConvergenceCheck out;
  out.value = lowrank ? averaged_qfi_lowrank(config, belief, tol)
                      : averaged_qfi(config, belief, tol);
  out.value_doubled = lowrank ? averaged_qfi_lowrank(config, doubled, tol)
                              : averaged_qfi(config, doubled, tol);
  const double scale = std::max(std::abs(out.value_doubled), 1e-300);
  out.rel_change = std::abs(out.value - out.value_doubled) / scale;
  out.converged = out.rel_change <= tol.convergence_rel;
  return out;
}

}  // namespace qcrit
