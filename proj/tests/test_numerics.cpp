#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qcrit/numerics.hpp"

using namespace qcrit;

namespace {

Eigen::MatrixXcd random_hermitian(int d, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXcd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  return 0.5 * (a + a.adjoint().eval());
}

Eigen::MatrixXd random_symmetric(int d, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = dist(rng);
  return 0.5 * (a + a.transpose().eval());
}

template <typename Scalar>
void check_reconstruction(const DenseMatrix<Scalar>& a, double tol_rel) {
  const auto eig = hermitian_eig(a);
  const double scale = max_abs(a);
  const DenseMatrix<Scalar> rebuilt =
      eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
  CHECK(max_abs(rebuilt - a) <= tol_rel * scale);
  const DenseMatrix<Scalar> gram = eig.vectors.adjoint() * eig.vectors;
  CHECK(max_abs(gram - DenseMatrix<Scalar>::Identity(a.rows(), a.cols())) <=
        tol_rel);
  for (Eigen::Index i = 1; i < eig.values.size(); ++i)
    CHECK(eig.values[i] >= eig.values[i - 1]);
}

}  // namespace

TEST_CASE("hermitian_eig: diagonal matrix") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const auto eig = hermitian_eig(a);
  CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(3.0).epsilon(1e-14));
  // eigenvectors are the identity columns (phase convention: real positive)
  CHECK(std::abs(eig.vectors(1, 0) - 1.0) < 1e-14);
  CHECK(std::abs(eig.vectors(0, 1) - 1.0) < 1e-14);
}

TEST_CASE("hermitian_eig: pauli-x spectrum") {
  Eigen::MatrixXcd a(2, 2);
  a << 0, 1, 1, 0;
  const auto eig = hermitian_eig(a);
  CHECK(eig.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hermitian_eig: rejects bad input") {
  Eigen::MatrixXcd rect = Eigen::MatrixXcd::Zero(2, 3);
  CHECK_THROWS_AS(hermitian_eig(rect), std::invalid_argument);
  Eigen::MatrixXcd nonherm(2, 2);
  nonherm << 0, 1, 2, 0;
  CHECK_THROWS_AS(hermitian_eig(nonherm), std::invalid_argument);
}

TEST_CASE("hermitian_eig: reconstruction on random matrices") {
  std::mt19937 rng(71);
  check_reconstruction<Complex>(random_hermitian(8, rng), 1e-10);
  check_reconstruction<Complex>(random_hermitian(64, rng), 1e-10);
  check_reconstruction<double>(random_symmetric(64, rng), 1e-10);
}

TEST_CASE("hermitian_eig: deterministic phase") {
  std::mt19937 rng(5);
  const Eigen::MatrixXcd a = random_hermitian(12, rng);
  const auto e1 = hermitian_eig(a);
  const auto e2 = hermitian_eig(a);
  CHECK(max_abs(e1.vectors - e2.vectors) == 0.0);
  // first significant component of every column is real positive
  for (int c = 0; c < 12; ++c) {
    for (int r = 0; r < 12; ++r) {
      if (std::abs(e1.vectors(r, c)) > 1e-8) {
        CHECK(std::abs(std::imag(e1.vectors(r, c))) <= 1e-12);
        CHECK(std::real(e1.vectors(r, c)) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("hermitian_eig: large dimension reconstruction") {
  std::mt19937 rng(2024);
  check_reconstruction<double>(random_symmetric(1100, rng), 1e-10);
  check_reconstruction<Complex>(random_hermitian(300, rng), 1e-10);
}

TEST_CASE("kron: identities and diagonal case") {
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  CHECK(max_abs(kron(id2, id2) - Eigen::MatrixXcd::Identity(4, 4)) == 0.0);

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
  b(0, 0) = 5.0;
  b(1, 1) = 7.0;
  const Eigen::MatrixXcd k = kron(a, b);
  CHECK(k(0, 0) == Complex(10.0));
  CHECK(k(1, 1) == Complex(14.0));
  CHECK(k(2, 2) == Complex(15.0));
  CHECK(k(3, 3) == Complex(21.0));
}

TEST_CASE("kron: index formula oracle on random 2x2") {
  std::mt19937 rng(13);
  const Eigen::MatrixXcd a = random_hermitian(2, rng);
  const Eigen::MatrixXcd b = random_hermitian(2, rng);
  const Eigen::MatrixXcd k = kron(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          CHECK(k(i * 2 + p, j * 2 + q) == a(i, j) * b(p, q));
}

TEST_CASE("kron: associativity") {
  std::mt19937 rng(99);
  const Eigen::MatrixXcd a = random_hermitian(2, rng);
  const Eigen::MatrixXcd b = random_hermitian(3, rng);
  const Eigen::MatrixXcd c = random_hermitian(2, rng);
  const Eigen::MatrixXcd left = kron(kron(a, b), c);
  const Eigen::MatrixXcd right = kron(a, kron(b, c));
  CHECK(max_abs(left - right) <= 1e-14 * max_abs(left));
}

TEST_CASE("gauss_hermite: moments match the Gaussian") {
  const double mu = 0.7, sigma = 0.31;
  for (int m : {2, 3, 8, 64, 128}) {
    const QuadratureRule r = gauss_hermite(m, mu, sigma);
    CHECK(r.nodes.size() == m);
    CHECK(std::abs(r.weights.sum() - 1.0) <= 1e-12);
    const double m1 = r.weights.dot(r.nodes);
    CHECK(std::abs(m1 - mu) <= 1e-9 * std::abs(mu));
    const Eigen::ArrayXd centered = r.nodes.array() - mu;
    const double m2 = (r.weights.array() * centered.square()).sum();
    CHECK(std::abs(m2 - sigma * sigma) <= 1e-9 * sigma * sigma);
    const double m3 =
        (r.weights.array() * centered.square() * centered).sum();
    CHECK(std::abs(m3) <= 1e-9 * sigma * sigma * sigma);
    // raw third moment vs mu^3 + 3 mu sigma^2
    const double raw3 = (r.weights.array() * r.nodes.array().cube()).sum();
    const double want3 = mu * mu * mu + 3.0 * mu * sigma * sigma;
    CHECK(std::abs(raw3 - want3) <= 1e-9 * std::abs(want3));
  }
}

TEST_CASE("gauss_hermite: polynomial exactness up to degree 2M-1") {
  // central even moments of the Gaussian are sigma^p (p-1)!!
  const double sigma = 1.7;
  const QuadratureRule r = gauss_hermite(8, 0.0, sigma);
  double want = 1.0;  // (p-1)!! running product
  double sp = 1.0;
  for (int p = 2; p <= 14; p += 2) {
    want *= (p - 1);
    sp *= sigma * sigma;
    const double got = (r.weights.array() * r.nodes.array().pow(p)).sum();
    CHECK(std::abs(got - want * sp) <= 1e-10 * want * sp);
  }
  // odd moments vanish by node symmetry
  for (int p = 1; p <= 15; p += 2) {
    const double got = (r.weights.array() * r.nodes.array().pow(p)).sum();
    const double scale =
        (r.weights.array() * r.nodes.array().abs().pow(p)).sum();
    CHECK(std::abs(got) <= 1e-10 * scale);
  }
}

TEST_CASE("gauss_hermite: node symmetry about the mean") {
  const QuadratureRule r = gauss_hermite(64, 2.5, 0.4);
  const int m = static_cast<int>(r.nodes.size());
  for (int i = 0; i < m / 2; ++i) {
    CHECK(std::abs((r.nodes[i] - 2.5) + (r.nodes[m - 1 - i] - 2.5)) <= 1e-12);
    CHECK(r.weights[i] == r.weights[m - 1 - i]);
  }
}

TEST_CASE("gauss_hermite: point mass and argument errors") {
  const QuadratureRule r = gauss_hermite(64, 1.25, 0.0);
  CHECK(r.nodes.size() == 1);
  CHECK(r.nodes[0] == 1.25);
  CHECK(r.weights[0] == 1.0);
  CHECK_THROWS_AS(gauss_hermite(0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite(4, 0.0, -1.0), std::invalid_argument);
}
