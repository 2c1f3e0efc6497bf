#include "qcrit/qfi.hpp"

namespace qcrit {

QfiMatrix tfim_qfim_closed(const TfimParams& p) {
  p.validate();
  const Eigen::VectorXd ks = tfim_momenta(p.n_spins);
  QfiMatrix m;
  for (Eigen::Index i = 0; i < ks.size(); ++i) {
    const double sk = std::sin(ks[i]);
    const double d =
        p.g * p.g + p.omega * p.omega - 2.0 * p.g * p.omega * std::cos(ks[i]);
    const double w = sk * sk / (d * d);
    m.i_oo += p.g * p.g * w;
    m.i_og += -p.g * p.omega * w;
    m.i_gg += p.omega * p.omega * w;
  }
  return m;
}

QfiMatrix tfim_qfim_numeric(const TfimParams& p) {
  const TfimGroundState gs = tfim_ground_state(p);
  const Eigen::VectorXd tau_o = tfim_theta_grads(p, ParameterId::Omega);
  const Eigen::VectorXd tau_g = tfim_theta_grads(p, ParameterId::Coupling);
  QfiMatrix m;
  for (Eigen::Index i = 0; i < gs.thetas.size(); ++i) {
    const double c = std::cos(0.5 * gs.thetas[i]);
    const double s = std::sin(0.5 * gs.thetas[i]);
    const Eigen::Vector2d psi(c, s);
    const Eigen::Vector2d dtheta(-0.5 * s, 0.5 * c);
    const Eigen::Vector2d dpsi_o = tau_o[i] * dtheta;
    const Eigen::Vector2d dpsi_g = tau_g[i] * dtheta;
    m.i_oo += qfim_pure(psi, dpsi_o, dpsi_o);
    m.i_og += qfim_pure(psi, dpsi_o, dpsi_g);
    m.i_gg += qfim_pure(psi, dpsi_g, dpsi_g);
  }
  return m;
}

QfiMatrix lz_qfim_closed(const LzParams& p) {
  if (p.omega == 0.0 && p.g == 0.0)
    throw degenerate_error("lz_qfim_closed: omega = g = 0");
  p.validate();
  const double r2 = p.omega * p.omega + p.g * p.g;
  const double f = 1.0 / (r2 * r2);
  return {p.g * p.g * f, -p.g * p.omega * f, p.omega * p.omega * f};
}

QfiMatrix lmg_thermo_qfim(double omega, double g) {
  if (!std::isfinite(omega) || !std::isfinite(g) || omega <= 0.0)
    throw std::invalid_argument("lmg_thermo_qfim: omega must be positive");
  if (g >= omega)
    throw out_of_phase_error(
        "lmg_thermo_qfim: requires g < omega (squeezing parameter complex "
        "otherwise)");
  const double dxi_o = g / (4.0 * omega * (omega - g));
  const double dxi_g = -1.0 / (4.0 * (omega - g));
  return {2.0 * dxi_o * dxi_o, 2.0 * dxi_o * dxi_g, 2.0 * dxi_g * dxi_g};
}

QfiMatrix lmg_qfim_numeric(const LmgParams& p) {
  const LmgEigenSystem sys(p);
  const Eigen::VectorXd& psi = sys.ground().amplitudes;
  const Eigen::VectorXd d_o = sys.gradient(ParameterId::Omega);
  const Eigen::VectorXd d_g = sys.gradient(ParameterId::Coupling);
  return {qfim_pure(psi, d_o, d_o), qfim_pure(psi, d_o, d_g),
          qfim_pure(psi, d_g, d_g)};
}

}  // namespace qcrit
