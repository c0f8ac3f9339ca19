#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gapwave/error.hpp"
#include "gapwave/tridiagonal_eigen.hpp"

using namespace gapwave;

namespace {

Eigen::MatrixXd dense(const std::vector<double>& d, const std::vector<double>& e) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = d[static_cast<std::size_t>(i)];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = e[static_cast<std::size_t>(i)];
  }
  return m;
}

void check_against_dense(const std::vector<double>& d, const std::vector<double>& e) {
  const Eigen::MatrixXd m = dense(d, e);
  const auto r = symmetric_tridiagonal_eigen(d, e);
  const Eigen::VectorXd want = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  REQUIRE(r.values.size() == d.size());
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(std::abs(r.values[k] - want[static_cast<Eigen::Index>(k)]) < 1e-12 * scale);
  for (std::size_t k = 1; k < d.size(); ++k) CHECK(r.values[k] >= r.values[k - 1]);
  const auto n = static_cast<Eigen::Index>(d.size());
  CHECK((r.vectors.transpose() * r.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(r.values.data(), n);
  CHECK((m * r.vectors - r.vectors * lambda.asDiagonal()).cwiseAbs().maxCoeff() < 1e-11 * scale);
}

}  // namespace

TEST_CASE("random tridiagonal matrices agree with a dense eigensolver") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  for (std::size_t n : {1u, 2u, 3u, 10u, 57u, 150u}) {
    std::vector<double> d(n), e(n - 1);
    for (double& x : d) x = nd(rng);
    for (double& x : e) x = nd(rng);
    check_against_dense(d, e);
  }
}

TEST_CASE("Wilkinson matrix with near-degenerate pairs") {
  const std::size_t n = 21;
  std::vector<double> d(n), e(n - 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::abs(static_cast<double>(i) - 10.0);
  check_against_dense(d, e);
}

TEST_CASE("exactly degenerate and decoupled blocks") {
  std::vector<double> d{2.0, 2.0, 2.0, 5.0, 5.0};
  std::vector<double> e{0.0, 0.0, 0.0, 0.0};
  const auto r = symmetric_tridiagonal_eigen(d, e);
  CHECK(r.values == std::vector<double>{2.0, 2.0, 2.0, 5.0, 5.0});
  std::vector<double> e2{1.0, 0.0, 1e-300, 3.0};
  check_against_dense(d, e2);
}

TEST_CASE("free Dirichlet chain has the closed-form spectrum") {
  const std::size_t n = 40;
  std::vector<double> d(n, 2.0), e(n - 1, -1.0);
  const auto r = symmetric_tridiagonal_eigen(d, e);
  for (std::size_t k = 0; k < n; ++k) {
    const double want = 2.0 - 2.0 * std::cos(static_cast<double>(k + 1) * M_PI / static_cast<double>(n + 1));
    CHECK(r.values[k] == doctest::Approx(want).epsilon(1e-12));
    // sin(k pi i / (n+1)) up to normalization, positive first component
    const double s = std::sin(static_cast<double>(k + 1) * M_PI / static_cast<double>(n + 1));
    CHECK(r.vectors(0, static_cast<Eigen::Index>(k)) > 0.0);
    CHECK(r.vectors(0, static_cast<Eigen::Index>(k)) == doctest::Approx(s * std::sqrt(2.0 / (n + 1))).epsilon(1e-9));
  }
}

TEST_CASE("sign convention makes the first significant component positive") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  std::vector<double> d(30), e(29);
  for (double& x : d) x = nd(rng);
  for (double& x : e) x = nd(rng);
  const auto r = symmetric_tridiagonal_eigen(d, e);
  for (Eigen::Index k = 0; k < r.vectors.cols(); ++k) {
    const auto col = r.vectors.col(k);
    const double big = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i)
      if (std::abs(col[i]) > 1e-3 * big) {
        CHECK(col[i] > 0.0);
        break;
      }
  }
}

TEST_CASE("values-only mode returns the same spectrum") {
  std::vector<double> d{1.0, -2.0, 0.5, 3.0}, e{0.3, -0.7, 1.1};
  const auto full = symmetric_tridiagonal_eigen(d, e);
  const auto vals = symmetric_tridiagonal_eigen(d, e, false);
  CHECK(vals.vectors.size() == 0);
  for (std::size_t k = 0; k < 4; ++k) CHECK(vals.values[k] == doctest::Approx(full.values[k]).epsilon(1e-14));
}

TEST_CASE("iteration cap and bad shapes are reported") {
  std::vector<double> d{1.0, 2.0, 3.0}, e{1.0, 1.0};
  CHECK_THROWS_AS(symmetric_tridiagonal_eigen(d, e, true, 0), ConvergenceError);
  CHECK_THROWS_AS(symmetric_tridiagonal_eigen(std::vector<double>{}, std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(symmetric_tridiagonal_eigen(d, std::vector<double>{1.0}), InvalidArgument);
}
