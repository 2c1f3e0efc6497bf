#include "qcrit/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qcrit {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// TFIM
// ---------------------------------------------------------------------------

void TfimParams::validate() const {
  if (!std::isfinite(omega) || !std::isfinite(g))
    throw std::invalid_argument("TfimParams: parameters must be finite");
  if (omega <= 0.0)
    throw std::invalid_argument("TfimParams: omega must be positive");
  if (n_spins < 2 || n_spins % 2 != 0)
    throw std::invalid_argument("TfimParams: n_spins must be even and >= 2");
}

Eigen::VectorXd tfim_momenta(int n_spins) {
  if (n_spins < 2 || n_spins % 2 != 0)
    throw std::invalid_argument("tfim_momenta: n_spins must be even and >= 2");
  const int blocks = n_spins / 2;
  Eigen::VectorXd k(blocks);
  for (int n = 0; n < blocks; ++n) k[n] = kPi * (2.0 * n + 1.0) / n_spins;
  return k;
}

double tfim_theta(double omega, double g, double k) {
  const double y = g * std::sin(k);
  const double x = g * std::cos(k) - omega;
  if (y == 0.0 && x == 0.0)
    throw degenerate_error(
        "tfim_theta: angle undefined, both arctangent arguments vanish");
  return std::atan2(y, x);
}

double tfim_theta_grad(double omega, double g, double k, ParameterId wrt) {
  const double d = g * g + omega * omega - 2.0 * g * omega * std::cos(k);
  if (d == 0.0)
    throw singular_point_error(
        "tfim_theta_grad: vanishing denominator (g = omega, k = 0)");
  return (wrt == ParameterId::Omega ? g : -omega) * std::sin(k) / d;
}

double tfim_block_energy(double omega, double g, double k) {
  const double d = g * g + omega * omega - 2.0 * g * omega * std::cos(k);
  return -2.0 * std::sqrt(d);
}

TfimGroundState tfim_ground_state(const TfimParams& p) {
  p.validate();
  TfimGroundState s;
  s.momenta = tfim_momenta(p.n_spins);
  s.thetas.resize(s.momenta.size());
  for (Eigen::Index i = 0; i < s.momenta.size(); ++i)
    s.thetas[i] = tfim_theta(p.omega, p.g, s.momenta[i]);
  return s;
}

Eigen::VectorXd tfim_theta_grads(const TfimParams& p, ParameterId wrt) {
  p.validate();
  const Eigen::VectorXd k = tfim_momenta(p.n_spins);
  Eigen::VectorXd tau(k.size());
  for (Eigen::Index i = 0; i < k.size(); ++i)
    tau[i] = tfim_theta_grad(p.omega, p.g, k[i], wrt);
  return tau;
}

namespace {

void require_same_grid(const TfimGroundState& a, const TfimGroundState& b) {
  if (a.momenta.size() != b.momenta.size() ||
      (a.momenta - b.momenta).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("tfim_overlap: momentum grids differ");
}

}  // namespace

double tfim_overlap(const TfimGroundState& a, const TfimGroundState& b) {
  require_same_grid(a, b);
  double f = 1.0;
  for (Eigen::Index i = 0; i < a.thetas.size(); ++i)
    f *= std::cos(0.5 * (a.thetas[i] - b.thetas[i]));
  return f;
}

TfimPairOverlaps tfim_pair_overlaps(const TfimGroundState& a,
                                    const TfimGroundState& b,
                                    const Eigen::VectorXd& tau_a,
                                    const Eigen::VectorXd& tau_b) {
  require_same_grid(a, b);
  if (tau_a.size() != a.thetas.size() || tau_b.size() != b.thetas.size())
    throw std::invalid_argument("tfim_pair_overlaps: derivative size mismatch");
  // One pass over blocks carrying the (no derivative, derivative on a,
  // derivative on b, one derivative on each) amplitudes.
  double f = 1.0, ga = 0.0, gb = 0.0, h = 0.0;
  for (Eigen::Index i = 0; i < a.thetas.size(); ++i) {
    const double half = 0.5 * (a.thetas[i] - b.thetas[i]);
    const double c = std::cos(half);
    const double s = std::sin(half);
    const double u = -0.5 * tau_a[i] * s;              // <da|b> block
    const double v = 0.5 * tau_b[i] * s;               // <a|db> block
    const double w = 0.25 * tau_a[i] * tau_b[i] * c;   // <da|db> block
    h = h * c + f * w + ga * v + gb * u;
    ga = ga * c + f * u;
    gb = gb * c + f * v;
    f *= c;
  }
  return {f, ga, gb, h};
}

Eigen::VectorXd tfim_state_vector(const TfimGroundState& s) {
  const int blocks = static_cast<int>(s.thetas.size());
  if (blocks > 24)
    throw std::invalid_argument("tfim_state_vector: dense state too large");
  Eigen::VectorXd v = Eigen::VectorXd::Ones(1);
  for (int j = 0; j < blocks; ++j) {
    const double c = std::cos(0.5 * s.thetas[j]);
    const double sn = std::sin(0.5 * s.thetas[j]);
    Eigen::VectorXd next(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next[2 * i] = v[i] * c;
      next[2 * i + 1] = v[i] * sn;
    }
    v.swap(next);
  }
  return v;
}

Eigen::VectorXd tfim_state_grad_vector(const TfimGroundState& s,
                                       const Eigen::VectorXd& tau) {
  const int blocks = static_cast<int>(s.thetas.size());
  if (tau.size() != blocks)
    throw std::invalid_argument("tfim_state_grad_vector: tau size mismatch");
  if (blocks > 24)
    throw std::invalid_argument("tfim_state_grad_vector: state too large");
  const Eigen::Index dim = Eigen::Index(1) << blocks;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
  for (int jd = 0; jd < blocks; ++jd) {
    if (tau[jd] == 0.0) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(1);
    for (int j = 0; j < blocks; ++j) {
      double c = std::cos(0.5 * s.thetas[j]);
      double sn = std::sin(0.5 * s.thetas[j]);
      if (j == jd) {
        const double dc = -0.5 * tau[j] * sn;
        const double ds = 0.5 * tau[j] * c;
        c = dc;
        sn = ds;
      }
      Eigen::VectorXd next(2 * v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        next[2 * i] = v[i] * c;
        next[2 * i + 1] = v[i] * sn;
      }
      v.swap(next);
    }
    grad += v;
  }
  return grad;
}

// ---------------------------------------------------------------------------
// LMG
// ---------------------------------------------------------------------------

void LmgParams::validate() const {
  if (!std::isfinite(omega) || !std::isfinite(g))
    throw std::invalid_argument("LmgParams: parameters must be finite");
  if (omega <= 0.0)
    throw std::invalid_argument("LmgParams: omega must be positive");
  if (n_spins < 2)
    throw std::invalid_argument("LmgParams: n_spins must be >= 2");
}

namespace {

// <i+1| S_x |i> in the |S, m> basis with m = i - S.
double sx_offdiag(double s, int i) {
  const double m = i - s;
  return 0.5 * std::sqrt(s * (s + 1.0) - m * (m + 1.0));
}

// Tridiagonal matrix of field_scale * S_z + coupling_scale * S_x^2 restricted
// to one parity sector (global indices parity, parity+2, ...).
struct SectorTridiag {
  std::vector<int> index;
  Eigen::VectorXd diag;
  Eigen::VectorXd sub;
};

SectorTridiag lmg_sector(int n_spins, int parity, double field_scale,
                         double coupling_scale) {
  const int d = n_spins + 1;
  const double s = 0.5 * n_spins;
  SectorTridiag t;
  for (int i = parity; i < d; i += 2) t.index.push_back(i);
  const int n = static_cast<int>(t.index.size());
  t.diag.resize(n);
  t.sub.resize(std::max(0, n - 1));
  for (int j = 0; j < n; ++j) {
    const int i = t.index[j];
    const double xlo = i > 0 ? sx_offdiag(s, i - 1) : 0.0;
    const double xhi = i < d - 1 ? sx_offdiag(s, i) : 0.0;
    t.diag[j] = field_scale * (i - s) + coupling_scale * (xlo * xlo + xhi * xhi);
    if (j + 1 < n)
      t.sub[j] = coupling_scale * sx_offdiag(s, i) * sx_offdiag(s, i + 1);
  }
  return t;
}

Eigen::VectorXd tridiag_apply(const SectorTridiag& t, const Eigen::VectorXd& v) {
  const int n = static_cast<int>(t.diag.size());
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    double x = t.diag[j] * v[j];
    if (j > 0) x += t.sub[j - 1] * v[j - 1];
    if (j + 1 < n) x += t.sub[j] * v[j + 1];
    out[j] = x;
  }
  return out;
}

}  // namespace

Eigen::MatrixXd lmg_hamiltonian(const LmgParams& p) {
  p.validate();
  const int d = p.n_spins + 1;
  const double s = 0.5 * p.n_spins;
  const double c = -p.g / p.n_spins;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double xlo = i > 0 ? sx_offdiag(s, i - 1) : 0.0;
    const double xhi = i < d - 1 ? sx_offdiag(s, i) : 0.0;
    h(i, i) = p.omega * (i - s) + c * (xlo * xlo + xhi * xhi);
    if (i < d - 2) {
      const double v = c * sx_offdiag(s, i) * sx_offdiag(s, i + 1);
      h(i, i + 2) = v;
      h(i + 2, i) = v;
    }
  }
  return h;
}

LmgEigenSystem::LmgEigenSystem(const LmgParams& p, const Tolerances& tol)
    : params_(p), tol_(tol) {
  p.validate();
  const double coupling = -p.g / p.n_spins;
  const SectorTridiag even = lmg_sector(p.n_spins, 0, p.omega, coupling);
  const SectorTridiag odd = lmg_sector(p.n_spins, 1, p.omega, coupling);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev_even, ev_odd;
  ev_even.computeFromTridiagonal(even.diag, even.sub, Eigen::EigenvaluesOnly);
  ev_odd.computeFromTridiagonal(odd.diag, odd.sub, Eigen::EigenvaluesOnly);
  if (ev_even.info() != Eigen::Success || ev_odd.info() != Eigen::Success)
    throw std::runtime_error("LmgEigenSystem: eigensolver did not converge");
  const Eigen::VectorXd& le = ev_even.eigenvalues();
  const Eigen::VectorXd& lo = ev_odd.eigenvalues();

  const bool even_ground = le[0] <= lo[0];
  const SectorTridiag& gsec = even_ground ? even : odd;
  const Eigen::VectorXd& other = even_ground ? lo : le;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(gsec.diag, gsec.sub);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("LmgEigenSystem: eigensolver did not converge");
  sector_index_ = gsec.index;
  sector_values_ = es.eigenvalues();
  sector_vectors_ = es.eigenvectors();

  h_norm_ = std::max({std::abs(le[0]), std::abs(le[le.size() - 1]),
                      std::abs(lo[0]), std::abs(lo[lo.size() - 1])});

  const double e0 = sector_values_[0];
  const double in_sector_e1 = sector_values_.size() > 1
                                  ? sector_values_[1]
                                  : std::numeric_limits<double>::infinity();
  coupled_gap_ = in_sector_e1 - e0;

  const int d = p.n_spins + 1;
  Eigen::VectorXd amp = Eigen::VectorXd::Zero(d);
  for (std::size_t j = 0; j < sector_index_.size(); ++j)
    amp[sector_index_[j]] = sector_vectors_(j, 0);
  // Fix the global sign: largest-magnitude amplitude real positive.
  Eigen::Index imax = 0;
  amp.cwiseAbs().maxCoeff(&imax);
  if (amp[imax] < 0.0) {
    amp = -amp;
    sector_vectors_.col(0) = -sector_vectors_.col(0);
  }

  ground_.amplitudes = std::move(amp);
  ground_.energy = e0;
  ground_.gap = std::min(in_sector_e1, other[0]) - e0;
  ground_.near_degenerate =
      ground_.gap < tol_.degeneracy_rel * (h_norm_ > 0.0 ? h_norm_ : 1.0);
}

Eigen::VectorXd LmgEigenSystem::gradient(ParameterId wrt) const {
  const double scale = h_norm_ > 0.0 ? h_norm_ : 1.0;
  if (!(coupled_gap_ > tol_.degeneracy_rel * scale))
    throw near_degenerate_error(
        "lmg_ground_state_grad: spectral gap too small for a perturbative "
        "derivative");
  const int n = static_cast<int>(sector_values_.size());
  const double s = 0.5 * params_.n_spins;
  const Eigen::VectorXd v0 = sector_vectors_.col(0);

  Eigen::VectorXd b(n);
  if (wrt == ParameterId::Omega) {
    for (int j = 0; j < n; ++j) b[j] = (sector_index_[j] - s) * v0[j];
  } else {
    // dH/dg = -(1/N) S_x^2, tridiagonal within the sector.
    const SectorTridiag dg = lmg_sector(params_.n_spins, sector_index_[0] % 2,
                                        0.0, -1.0 / params_.n_spins);
    b = tridiag_apply(dg, v0);
  }

  Eigen::VectorXd coef = sector_vectors_.transpose() * b;
  coef[0] = 0.0;
  const double e0 = sector_values_[0];
  for (int j = 1; j < n; ++j) coef[j] /= (e0 - sector_values_[j]);
  const Eigen::VectorXd loc = sector_vectors_ * coef;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(params_.n_spins + 1);
  for (int j = 0; j < n; ++j) out[sector_index_[j]] = loc[j];
  return out;
}

LmgGroundState lmg_ground_state(const LmgParams& p) {
  return LmgEigenSystem(p).ground();
}

Eigen::VectorXd lmg_ground_state_grad(const LmgParams& p, ParameterId wrt) {
  return LmgEigenSystem(p).gradient(wrt);
}

// ---------------------------------------------------------------------------
// Landau-Zener
// ---------------------------------------------------------------------------

void LzParams::validate() const {
  if (!std::isfinite(omega) || !std::isfinite(g))
    throw std::invalid_argument("LzParams: parameters must be finite");
  if (omega <= 0.0)
    throw std::invalid_argument("LzParams: omega must be positive");
}

Eigen::Vector2d lz_ground_state(const LzParams& p) {
  if (p.omega == 0.0 && p.g == 0.0)
    throw degenerate_error("lz_ground_state: omega = g = 0");
  p.validate();
  const double r = std::hypot(p.omega, p.g);
  // g + r rewritten for g < 0 where the direct sum cancels.
  const double gpr = p.g >= 0.0 ? p.g + r : p.omega * p.omega / (r - p.g);
  const double den = std::sqrt(2.0 * p.g * gpr + 2.0 * p.omega * p.omega);
  return {-gpr / den, p.omega / den};
}

Eigen::Vector2d lz_ground_state_grad(const LzParams& p, ParameterId wrt) {
  if (p.omega == 0.0 && p.g == 0.0)
    throw degenerate_error("lz_ground_state_grad: omega = g = 0");
  p.validate();
  const double r2 = p.omega * p.omega + p.g * p.g;
  const double chi = std::atan2(p.omega, p.g);
  const double dchi = (wrt == ParameterId::Omega ? p.g : -p.omega) / r2;
  return {0.5 * dchi * std::sin(0.5 * chi), 0.5 * dchi * std::cos(0.5 * chi)};
}

}  // namespace qcrit
