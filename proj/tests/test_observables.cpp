#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gapwave/dynamics.hpp"
#include "gapwave/error.hpp"
#include "gapwave/observables.hpp"
#include "gapwave/schmidt.hpp"

using namespace gapwave;

namespace {

// Hermitian central-difference momentum matrix built from its definition.
Eigen::MatrixXcd momentum_matrix(const Grid& g, double hbar) {
  const auto n = static_cast<Eigen::Index>(g.n_points);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    p(i, i + 1) = cd(0.0, -hbar / (2.0 * g.dx));
    p(i + 1, i) = cd(0.0, hbar / (2.0 * g.dx));
  }
  return p;
}

std::vector<LinearObservable> all_observables(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<double> table(g.n_points);
  for (double& v : table) v = nd(rng);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(static_cast<Eigen::Index>(g.n_points), static_cast<Eigen::Index>(g.n_points));
  return {observables::Position{}, observables::Momentum{1.7},
          observables::Energy{build_hamiltonian(g, potentials::HarmonicOscillator{1.0})},
          observables::DiagonalTabulated{table}, dense_observable(m + m.adjoint())};
}

}  // namespace

TEST_CASE("observable matrices") {
  const Grid g = make_grid(-2.0, 2.0, 7);
  CHECK((observable_matrix(observables::Momentum{1.7}, g) - momentum_matrix(g, 1.7)).norm() < 1e-15);
  const Eigen::MatrixXcd x = observable_matrix(observables::Position{}, g);
  for (Eigen::Index i = 0; i < 7; ++i) CHECK(x(i, i).real() == doctest::Approx(g.site(static_cast<std::size_t>(i))));
  CHECK(x.isApprox(Eigen::MatrixXcd(x.diagonal().asDiagonal())));
}

TEST_CASE("momentum of a plane-wave packet") {
  const Grid g = make_grid(-30.0, 30.0, 1200);
  const double k0 = 1.5;
  const WaveFunction psi = slit_wave(g, {0.0, 3.0, k0, 1.0});
  // Central differences see sin(k dx)/dx for a pure plane wave.
  CHECK(one_body_expectation(psi, observables::Momentum{1.0}) == doctest::Approx(std::sin(k0 * g.dx) / g.dx).epsilon(1e-4));
  CHECK(std::abs(one_body_expectation(psi, observables::Position{})) < 1e-10);
}

TEST_CASE("product states reduce to one-body expectation values") {
  std::mt19937_64 rng(61);
  const Grid g = make_grid(-8.0, 8.0, 48);
  const auto obs = all_observables(g, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const WaveFunction psi = random_wave(g, rng), phi = random_wave(g, rng);
    const BipartiteWave prod = BipartiteWave::outer(psi, phi);
    for (const auto& o : obs) {
      const double want = one_body_expectation(psi, o);
      const ExpectationValue e = expectation_detail(prod, o);
      CHECK(std::abs(e.raw - want) <= 1e-10 * std::max(1.0, std::abs(want)));
      CHECK(e.trace_weight == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("trace weight and renormalized value for an entangled state") {
  const Grid g = make_grid(-20.0, 20.0, 400);
  const BipartiteWave p = build_double_slit(g, {-5.0, 0.5}, {5.0, 0.5}, SlitMode::Particle);
  const ExpectationValue e = expectation_detail(p, observables::Position{});
  // Tr[rho^dag rho] is the squared norm, 1 for every normalized state.
  CHECK(e.trace_weight == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(e.raw) < 1e-9);
  CHECK(purity(p) == doctest::Approx(0.5).epsilon(1e-12));
  const BipartiteWave w = build_double_slit(g, {-5.0, 0.5}, {5.0, 0.5}, SlitMode::Wave);
  CHECK(purity(w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Hermiticity guard") {
  CHECK_THROWS_AS(dense_observable(Eigen::MatrixXcd::Ones(3, 4)), InvalidArgument);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 1) = cd(0.0, 1.0);
  CHECK_THROWS_AS(dense_observable(m), InvalidArgument);
  m(1, 0) = cd(0.0, -1.0);
  CHECK_NOTHROW(dense_observable(m));

  std::mt19937_64 rng(62);
  const Grid g = make_grid(-1.0, 1.0, 3);
  const BipartiteWave psi = random_bipartite(g, rng);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(3, 3);
  bad(0, 1) = cd(0.0, 5.0);
  CHECK_THROWS_AS(expectation(psi, observables::DenseMatrix{bad}), InvalidArgument);
  BipartiteWave big = psi;
  big.amplitudes *= 3.0;
  CHECK_THROWS_AS(expectation(big, observables::Position{}), InvalidArgument);
}

TEST_CASE("position density of product, wave and particle states") {
  std::mt19937_64 rng(63);
  const Grid g = make_grid(-20.0, 20.0, 400);
  const WaveFunction psi = random_wave(g, rng);
  const Eigen::VectorXd d0 = position_density(BipartiteWave::outer(psi, psi));
  CHECK((d0 - psi.values.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-12 * d0.maxCoeff());

  const SlitSpec s1{-5.0, 0.5, 0.3}, s2{5.0, 0.5, -0.3};
  const WaveFunction p1 = slit_wave(g, s1), p2 = slit_wave(g, s2);
  for (SlitMode mode : {SlitMode::Wave, SlitMode::Particle}) {
    Eigen::VectorXd want = mode == SlitMode::Wave ? Eigen::VectorXd((p1.values + p2.values).cwiseAbs2())
                                                  : Eigen::VectorXd(p1.values.cwiseAbs2() + p2.values.cwiseAbs2());
    want /= g.dx * want.sum();
    const Eigen::VectorXd got = position_density(build_double_slit(g, s1, s2, mode));
    CHECK(std::abs(g.dx * got.sum() - 1.0) < 1e-12);
    for (Eigen::Index i = 0; i < want.size(); ++i)
      if (want[i] > 1e-12) CHECK(std::abs(got[i] - want[i]) <= 1e-9 * want[i]);
  }
}

TEST_CASE("slit states") {
  const Grid g = make_grid(-10.0, 10.0, 200);
  const WaveFunction w = slit_wave(g, {2.0, 1.0, 0.0, 1.0});
  CHECK(norm(w) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one_body_expectation(w, observables::Position{}) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(norm(slit_wave(g, {2.0, 1.0, 0.0, 0.5})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(slit_wave(g, {9.5, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(slit_wave(g, {0.0, 0.0}), InvalidArgument);

  const BipartiteWave p = build_double_slit(g, {-4.0, 0.5}, {4.0, 0.5}, SlitMode::Particle);
  CHECK(schmidt_rank(p, 1e-10) == 2);
  CHECK(entanglement_entropy(p) == doctest::Approx(std::numbers::ln2).epsilon(1e-10));
  CHECK(schmidt_rank(build_double_slit(g, {-4.0, 0.5}, {4.0, 0.5}, SlitMode::Wave), 1e-10) == 1);
}

TEST_CASE("coincident and vanishing slits") {
  const Grid g = make_grid(-10.0, 10.0, 200);
  const SlitSpec s{1.0, 0.8};
  const BipartiteWave p = build_double_slit(g, s, s, SlitMode::Particle);
  const BipartiteWave w = build_double_slit(g, s, s, SlitMode::Wave);
  CHECK(schmidt_rank(p, 1e-10) == 1);
  CHECK((position_density(p) - position_density(w)).cwiseAbs().maxCoeff() < 1e-9);

  SlitSpec off{-3.0, 0.8, 0.0, 0.0};
  const Eigen::VectorXd single = position_density(build_double_slit(g, s, off, SlitMode::Wave));
  Eigen::VectorXd want = slit_wave(g, s).values.cwiseAbs2();
  CHECK((single - want).cwiseAbs().maxCoeff() < 1e-12 * want.maxCoeff());
}

TEST_CASE("particle density deviates from the even mixture by at most twice the overlap") {
  const Grid g = make_grid(-15.0, 15.0, 300);
  for (double sep : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const WaveFunction a = slit_wave(g, {-sep / 2, 1.0}), b = slit_wave(g, {sep / 2, 1.0, 0.4});
    const Eigen::VectorXd mix = 0.5 * (a.values.cwiseAbs2() + b.values.cwiseAbs2());
    const Eigen::VectorXd got = position_density(double_slit_from_states(a, b, SlitMode::Particle));
    CHECK(g.dx * (got - mix).cwiseAbs().sum() <= 2.0 * std::abs(inner_product(a, b)) + 1e-12);
  }
}

TEST_CASE("density shortcut agrees with the bipartite route") {
  const Grid g = make_grid(-10.0, 10.0, 150);
  const WaveFunction a = slit_wave(g, {-1.0, 1.0, 0.5}), b = slit_wave(g, {1.5, 0.7, -0.2, 0.6});
  for (SlitMode mode : {SlitMode::Wave, SlitMode::Particle}) {
    const Eigen::VectorXd want = position_density(double_slit_from_states(a, b, mode));
    CHECK((double_slit_density(a, b, mode) - want).cwiseAbs().maxCoeff() < 1e-10 * want.maxCoeff());
  }
}

TEST_CASE("rho_of intertwines with the one-body propagator") {
  std::mt19937_64 rng(64);
  const Grid g = make_grid(-5.0, 5.0, 30);
  const HamiltonianOp h = build_hamiltonian(g, potentials::HarmonicOscillator{1.0});
  const EigenSystem es = eigensolve(h);
  const BipartiteWave psi = random_bipartite(g, rng);
  const double t = 0.9;
  Eigen::MatrixXcd u(30, 30);
  for (Eigen::Index k = 0; k < 30; ++k) {
    WaveFunction e = WaveFunction::zeros(g);
    e.values[k] = 1.0;
    u.col(k) = propagate_spectral(es, e, t).values;
  }
  const Eigen::MatrixXcd want = u * rho_of(psi).matrix * u.adjoint();
  CHECK((rho_of(propagate_bipartite_factored(es, psi, t)).matrix - want).norm() < 1e-10);

  const WaveFunction phi = random_wave(g, rng);
  const WaveFunction applied = rho_of(psi).apply(phi);
  Eigen::VectorXcd direct = Eigen::VectorXcd::Zero(30);
  for (Eigen::Index i = 0; i < 30; ++i)
    for (Eigen::Index j = 0; j < 30; ++j) direct[i] += g.dx * psi.amplitudes(i, j) * phi.values[j];
  CHECK((applied.values - direct).norm() < 1e-12);
}

TEST_CASE("fringe visibility") {
  const Grid g = make_grid(0.0, 1.0, 99);
  Eigen::VectorXd d(99), flat = Eigen::VectorXd::Ones(99), single(99), shallow(99);
  for (std::size_t i = 0; i < 99; ++i) {
    const double x = g.site(i);
    d[static_cast<Eigen::Index>(i)] = std::pow(std::cos(5.0 * std::numbers::pi * x), 2);
    single[static_cast<Eigen::Index>(i)] = std::exp(-50.0 * (x - 0.5) * (x - 0.5));
    shallow[static_cast<Eigen::Index>(i)] = 2.0 + std::cos(6.0 * std::numbers::pi * x);
  }
  const auto v = fringe_visibility(g, {d.data(), 99}, 0.0, 1.0);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(fringe_visibility(g, {flat.data(), 99}, 0.0, 1.0).has_value());
  CHECK_FALSE(fringe_visibility(g, {single.data(), 99}, 0.0, 1.0).has_value());
  const auto s = fringe_visibility(g, {shallow.data(), 99}, 0.0, 1.0);
  REQUIRE(s.has_value());
  CHECK(*s == doctest::Approx(0.5).epsilon(5e-3));
}
