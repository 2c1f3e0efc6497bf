#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "qcrit/models.hpp"
#include "qcrit/numerics.hpp"

using namespace qcrit;

namespace {
constexpr double kPi = std::numbers::pi;

// Sign-aligned central difference of a normalized eigenvector family.
template <typename F>
Eigen::VectorXd central_diff(const F& state_at, double x, double h) {
  Eigen::VectorXd lo = state_at(x - h);
  Eigen::VectorXd hi = state_at(x + h);
  const Eigen::VectorXd mid = state_at(x);
  if (mid.dot(lo) < 0) lo = -lo;
  if (mid.dot(hi) < 0) hi = -hi;
  return (hi - lo) / (2.0 * h);
}
}  // namespace

TEST_CASE("tfim_momenta: grid rule") {
  const Eigen::VectorXd k2 = tfim_momenta(2);
  REQUIRE(k2.size() == 1);
  CHECK(k2[0] == doctest::Approx(kPi / 2).epsilon(1e-15));

  const Eigen::VectorXd k4 = tfim_momenta(4);
  REQUIRE(k4.size() == 2);
  CHECK(k4[0] == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(k4[1] == doctest::Approx(3 * kPi / 4).epsilon(1e-15));

  const Eigen::VectorXd k20 = tfim_momenta(20);
  REQUIRE(k20.size() == 10);
  CHECK(k20[0] == doctest::Approx(kPi / 20).epsilon(1e-15));
  CHECK(k20[9] == doctest::Approx(19 * kPi / 20).epsilon(1e-15));
  for (int i = 0; i < 10; ++i) {
    CHECK(k20[i] > 0.0);
    CHECK(k20[i] < kPi);
    if (i) CHECK(k20[i] > k20[i - 1]);
  }

  CHECK_THROWS_AS(tfim_momenta(3), std::invalid_argument);
  CHECK_THROWS_AS(tfim_momenta(0), std::invalid_argument);
}

TEST_CASE("tfim_theta: branch values") {
  CHECK(tfim_theta(1.0, 0.0, 0.3) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(tfim_theta(1.0, 1.0, kPi / 2) ==
        doctest::Approx(3 * kPi / 4).epsilon(1e-15));
  CHECK(tfim_theta(0.0, 1.0, kPi / 2) ==
        doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(tfim_theta(0.0, 0.0, 0.5), degenerate_error);
}

TEST_CASE("tfim_theta_grad: hand values and finite differences") {
  CHECK(tfim_theta_grad(1.0, 1.0, kPi / 2, ParameterId::Omega) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tfim_theta_grad(1.0, 1.0, kPi / 2, ParameterId::Coupling) ==
        doctest::Approx(-0.5).epsilon(1e-15));
  // product reproduces the off-diagonal closed-form summand -g w sin^2 k / D^2
  const double prod = tfim_theta_grad(1.0, 1.0, kPi / 2, ParameterId::Omega) *
                      tfim_theta_grad(1.0, 1.0, kPi / 2, ParameterId::Coupling);
  CHECK(prod == doctest::Approx(-0.25).epsilon(1e-15));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uni(0.3, 1.8);
  for (int it = 0; it < 50; ++it) {
    const double w = uni(rng), g = uni(rng), k = uni(rng);
    const double h = 1e-6;
    const double fd_w =
        (tfim_theta(w + h, g, k) - tfim_theta(w - h, g, k)) / (2 * h);
    const double fd_g =
        (tfim_theta(w, g + h, k) - tfim_theta(w, g - h, k)) / (2 * h);
    CHECK(tfim_theta_grad(w, g, k, ParameterId::Omega) ==
          doctest::Approx(fd_w).epsilon(1e-6));
    CHECK(tfim_theta_grad(w, g, k, ParameterId::Coupling) ==
          doctest::Approx(fd_g).epsilon(1e-6));
  }
  CHECK_THROWS_AS(tfim_theta_grad(1.0, 1.0, 0.0, ParameterId::Omega),
                  singular_point_error);
}

TEST_CASE("tfim_theta_grad: squared equals the closed-form summand") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(0.2, 2.0);
  for (int it = 0; it < 200; ++it) {
    const double w = uni(rng), g = uni(rng);
    const double k = uni(rng) * 1.5;
    const double d = g * g + w * w - 2 * g * w * std::cos(k);
    const double summand = g * g * std::sin(k) * std::sin(k) / (d * d);
    const double tau = tfim_theta_grad(w, g, k, ParameterId::Omega);
    CHECK(std::abs(tau * tau - summand) <= 1e-14 * std::abs(summand));
  }
}

TEST_CASE("tfim_block_energy") {
  CHECK(tfim_block_energy(1.0, 1.0, kPi / 2) ==
        doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(tfim_block_energy(1.0, 0.0, 0.77) ==
        doctest::Approx(-2.0).epsilon(1e-15));
  // gap closes toward k -> 0 at the critical point
  CHECK(std::abs(tfim_block_energy(1.0, 1.0, 1e-8)) < 1e-7);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int it = 0; it < 100; ++it)
    CHECK(tfim_block_energy(std::abs(uni(rng)) + 0.1, uni(rng), uni(rng)) <=
          0.0);
}

TEST_CASE("tfim_ground_state") {
  const TfimGroundState s = tfim_ground_state({1.0, 1.0, 2});
  REQUIRE(s.thetas.size() == 1);
  CHECK(s.thetas[0] == doctest::Approx(3 * kPi / 4).epsilon(1e-15));

  const TfimGroundState s4 = tfim_ground_state({1.0, 0.0, 4});
  CHECK(s4.thetas[0] == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(s4.thetas[1] == doctest::Approx(kPi).epsilon(1e-15));

  // deterministic construction
  const TfimGroundState a = tfim_ground_state({0.9, 1.3, 12});
  const TfimGroundState b = tfim_ground_state({0.9, 1.3, 12});
  CHECK((a.thetas - b.thetas).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tfim_overlap(a, b) == 1.0);
}

TEST_CASE("tfim_overlap: dense kron oracle") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uni(0.3, 1.7);
  for (int it = 0; it < 20; ++it) {
    const TfimGroundState a = tfim_ground_state({uni(rng), uni(rng), 8});
    const TfimGroundState b = tfim_ground_state({uni(rng), uni(rng), 8});
    const double product = tfim_overlap(a, b);
    const double dense = tfim_state_vector(a).dot(tfim_state_vector(b));
    CHECK(std::abs(product - dense) <= 1e-12);
  }
  // orthogonal single block
  TfimGroundState a = tfim_ground_state({1.0, 0.0, 2});
  TfimGroundState b = a;
  b.thetas[0] = a.thetas[0] - kPi;
  CHECK(std::abs(tfim_overlap(a, b)) <= 1e-15);
  // mismatched grids
  const TfimGroundState c = tfim_ground_state({1.0, 0.0, 4});
  CHECK_THROWS_AS(tfim_overlap(a, c), std::invalid_argument);
}

TEST_CASE("tfim_pair_overlaps: dense oracle including derivatives") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> uni(0.3, 1.7);
  for (int it = 0; it < 20; ++it) {
    const TfimParams pa{uni(rng), uni(rng), 6};
    const TfimParams pb{uni(rng), uni(rng), 6};
    const TfimGroundState a = tfim_ground_state(pa);
    const TfimGroundState b = tfim_ground_state(pb);
    const Eigen::VectorXd ta = tfim_theta_grads(pa, ParameterId::Omega);
    const Eigen::VectorXd tb = tfim_theta_grads(pb, ParameterId::Omega);
    const TfimPairOverlaps o = tfim_pair_overlaps(a, b, ta, tb);

    const Eigen::VectorXd va = tfim_state_vector(a);
    const Eigen::VectorXd vb = tfim_state_vector(b);
    const Eigen::VectorXd da = tfim_state_grad_vector(a, ta);
    const Eigen::VectorXd db = tfim_state_grad_vector(b, tb);
    CHECK(std::abs(o.psi_psi - va.dot(vb)) <= 1e-12);
    CHECK(std::abs(o.dpsi_psi - da.dot(vb)) <= 1e-12);
    CHECK(std::abs(o.psi_dpsi - va.dot(db)) <= 1e-12);
    CHECK(std::abs(o.dpsi_dpsi - da.dot(db)) <= 1e-12);
  }
}

TEST_CASE("tfim dense state gradient: finite-difference oracle") {
  const TfimParams p{1.1, 0.8, 6};
  auto state_at = [&](double w) -> Eigen::VectorXd {
    return tfim_state_vector(tfim_ground_state({w, p.g, p.n_spins}));
  };
  const Eigen::VectorXd fd = central_diff(state_at, p.omega, 1e-6);
  const Eigen::VectorXd an = tfim_state_grad_vector(
      tfim_ground_state(p), tfim_theta_grads(p, ParameterId::Omega));
  CHECK((fd - an).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("lmg_hamiltonian: small cases") {
  const Eigen::MatrixXd h0 = lmg_hamiltonian({1.0, 0.0, 2});
  const Eigen::MatrixXd want =
      Eigen::Vector3d(-1.0, 0.0, 1.0).asDiagonal().toDenseMatrix();
  CHECK(max_abs(h0 - want) <= 1e-15);

  // N=2, omega -> 0, g=2: spectrum of -S_x^2 for S=1 is {-1, -1, 0}
  const Eigen::MatrixXd h1 = lmg_hamiltonian({1e-300, 2.0, 2});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h1);
  CHECK(es.eigenvalues()[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(es.eigenvalues()[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(es.eigenvalues()[2]) <= 1e-12);

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uni(0.2, 2.0);
  for (int n : {3, 10, 50}) {
    const Eigen::MatrixXd h = lmg_hamiltonian({uni(rng), uni(rng), n});
    CHECK(hermiticity_residual(h) == 0.0);
  }
}

TEST_CASE("lmg_ground_state: decoupled limit and dense oracle") {
  const LmgGroundState gs = lmg_ground_state({1.0, 0.0, 2});
  CHECK(gs.energy == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(gs.amplitudes[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(gs.amplitudes[1]) <= 1e-14);
  CHECK(std::abs(gs.amplitudes[2]) <= 1e-14);

  // against the dense eigensolver on the full matrix
  for (const LmgParams p : {LmgParams{1.0, 0.5, 20}, LmgParams{1.0, 1.4, 17}}) {
    const LmgGroundState s = lmg_ground_state(p);
    CHECK(std::abs(s.amplitudes.norm() - 1.0) <= 1e-12);
    const auto eig = hermitian_eig(lmg_hamiltonian(p));
    CHECK(s.energy == doctest::Approx(eig.values[0]).epsilon(1e-12));
    CHECK(s.gap ==
          doctest::Approx(eig.values[1] - eig.values[0]).epsilon(1e-9));
    CHECK(s.gap >= 0.0);
    // variational bound: coupling can only lower the energy
    CHECK(s.energy <= -0.5 * p.n_spins * p.omega + 1e-12);
  }

  // bit-identical reruns
  const LmgGroundState r1 = lmg_ground_state({1.0, 0.7, 14});
  const LmgGroundState r2 = lmg_ground_state({1.0, 0.7, 14});
  CHECK((r1.amplitudes - r2.amplitudes).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lmg ground energy non-increasing in g") {
  double prev = std::numeric_limits<double>::infinity();
  for (double g = 0.0; g <= 2.01; g += 0.25) {
    const double e = lmg_ground_state({1.0, g, 12}).energy;
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("lmg_ground_state_grad: construction and oracles") {
  const LmgParams p{1.0, 0.5, 10};
  const LmgEigenSystem sys(p);
  for (ParameterId wrt : {ParameterId::Omega, ParameterId::Coupling}) {
    const Eigen::VectorXd d = sys.gradient(wrt);
    CHECK(std::abs(sys.ground().amplitudes.dot(d)) <= 1e-12);
    auto state_at = [&](double x) -> Eigen::VectorXd {
      LmgParams q = p;
      (wrt == ParameterId::Omega ? q.omega : q.g) = x;
      return lmg_ground_state(q).amplitudes;
    };
    const double x0 = wrt == ParameterId::Omega ? p.omega : p.g;
    const Eigen::VectorXd fd = central_diff(state_at, x0, 1e-5);
    CHECK((fd - d).norm() <= 1e-6 * std::max(1.0, d.norm()));
  }

  // g = 0: the ground state is an S_z eigenstate, no omega dependence
  const Eigen::VectorXd d0 =
      lmg_ground_state_grad({1.0, 0.0, 8}, ParameterId::Omega);
  CHECK(d0.cwiseAbs().maxCoeff() <= 1e-14);

  // forced refusal through the tolerance override
  Tolerances strict = default_tolerances;
  strict.degeneracy_rel = 1.0;
  const LmgEigenSystem guarded(p, strict);
  CHECK_THROWS_AS(guarded.gradient(ParameterId::Omega), near_degenerate_error);
}

TEST_CASE("lmg near-degeneracy flag deep in the broken phase") {
  // the even/odd splitting collapses exponentially in N for g >> omega
  const LmgGroundState s = lmg_ground_state({1.0, 8.0, 60});
  CHECK(s.near_degenerate);
  // the coupled (same-sector) gap stays healthy there
  const LmgEigenSystem sys({1.0, 8.0, 60});
  CHECK(sys.coupled_gap() > 1e-3);
  CHECK_NOTHROW(sys.gradient(ParameterId::Omega));
}

TEST_CASE("lz_ground_state: printed components and residual oracle") {
  const Eigen::Vector2d s0 = lz_ground_state({1.0, 0.0});
  CHECK(s0[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s0[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  const Eigen::Vector2d s1 = lz_ground_state({1.0, 1.0});
  CHECK(s1[0] == doctest::Approx(-std::cos(kPi / 8)).epsilon(1e-15));
  CHECK(s1[1] == doctest::Approx(std::sin(kPi / 8)).epsilon(1e-15));

  std::mt19937 rng(37);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int it = 0; it < 100; ++it) {
    const LzParams p{std::abs(uni(rng)) + 0.05, uni(rng)};
    const Eigen::Vector2d v = lz_ground_state(p);
    CHECK(std::abs(v.norm() - 1.0) <= 1e-14);
    // H in the stored frame and its ground energy
    Eigen::Matrix2d h;
    h << -p.g, p.omega, p.omega, p.g;
    h *= 0.5;
    const double e0 = -0.5 * std::hypot(p.omega, p.g);
    CHECK((h * v - e0 * v).cwiseAbs().maxCoeff() <= 1e-13 * std::abs(e0));
  }
  CHECK_THROWS_AS(lz_ground_state({0.0, 0.0}), degenerate_error);
}

TEST_CASE("lz_ground_state: stable for large negative coupling") {
  const Eigen::Vector2d v = lz_ground_state({1.0, -1e8});
  const double chi = std::atan2(1.0, -1e8);
  CHECK(v[0] == doctest::Approx(-std::cos(0.5 * chi)).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(std::sin(0.5 * chi)).epsilon(1e-12));
  CHECK(std::abs(v.norm() - 1.0) <= 1e-14);
}

TEST_CASE("lz_ground_state_grad: finite differences") {
  const LzParams p{1.0, 0.5};
  for (ParameterId wrt : {ParameterId::Omega, ParameterId::Coupling}) {
    auto state_at = [&](double x) -> Eigen::VectorXd {
      LzParams q = p;
      (wrt == ParameterId::Omega ? q.omega : q.g) = x;
      return lz_ground_state(q);
    };
    const double x0 = wrt == ParameterId::Omega ? p.omega : p.g;
    const Eigen::VectorXd fd = central_diff(state_at, x0, 1e-6);
    const Eigen::Vector2d an = lz_ground_state_grad(p, wrt);
    CHECK((fd - Eigen::VectorXd(an)).norm() <= 1e-6);
  }
  // the derivative stays orthogonal to the state (normalization preserved)
  const Eigen::Vector2d psi = lz_ground_state({1.0, 0.0});
  const Eigen::Vector2d d =
      lz_ground_state_grad({1.0, 0.0}, ParameterId::Omega);
  CHECK(std::abs(psi.dot(d)) <= 1e-15);
}

TEST_CASE("lz state aligns with sigma_x for strong coupling") {
  // sigma_x is diagonal in the stored frame
  const Eigen::Vector2d v = lz_ground_state({1.0, 1e4});
  const double sx = v[0] * v[0] - v[1] * v[1];
  CHECK(std::abs(sx - 1.0) <= 1e-6);
}
