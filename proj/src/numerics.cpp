#include "qcrit/numerics.hpp"

#include <map>
#include <mutex>

namespace qcrit {

namespace {

// Golub-Welsch on the Jacobi matrix of physicists' Hermite polynomials;
// weights come out normalized to the unit Gaussian measure (they are rows of
// an orthogonal matrix squared, so they sum to one to machine precision).
QuadratureRule unit_hermite_rule(int m) {
  QuadratureRule r;
  if (m == 1) {
    r.nodes = Eigen::VectorXd::Zero(1);
    r.weights = Eigen::VectorXd::Ones(1);
    return r;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(m - 1);
  for (int i = 1; i < m; ++i) sub[i - 1] = std::sqrt(0.5 * i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite: tridiagonal eigensolve failed");
  r.nodes = es.eigenvalues();
  r.weights = es.eigenvectors().row(0).array().square();
  // Enforce the exact +/- node symmetry of the rule.
  for (int i = 0, j = m - 1; i < j; ++i, --j) {
    const double node = 0.5 * (r.nodes[j] - r.nodes[i]);
    r.nodes[i] = -node;
    r.nodes[j] = node;
    const double w = 0.5 * (r.weights[i] + r.weights[j]);
    r.weights[i] = r.weights[j] = w;
  }
  if (m % 2 == 1) r.nodes[m / 2] = 0.0;
  return r;
}

const QuadratureRule& cached_unit_rule(int m) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, unit_hermite_rule(m)).first;
  return it->second;
}

}  // namespace

QuadratureRule gauss_hermite(int order, double mean, double sigma) {
  if (order < 1)
    throw std::invalid_argument("gauss_hermite: order must be >= 1");
  if (!std::isfinite(mean) || !std::isfinite(sigma) || sigma < 0.0)
    throw std::invalid_argument(
        "gauss_hermite: mean and sigma must be finite, sigma >= 0");
  QuadratureRule r;
  if (sigma == 0.0) {
    r.nodes = Eigen::VectorXd::Constant(1, mean);
    r.weights = Eigen::VectorXd::Ones(1);
    return r;
  }
  const QuadratureRule& unit = cached_unit_rule(order);
  r.nodes = (mean + (std::sqrt(2.0) * sigma) * unit.nodes.array()).matrix();
  r.weights = unit.weights;
  return r;
}

}  // namespace qcrit
