#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gapwave/error.hpp"
#include "gapwave/spectrum.hpp"
#include "test_support.hpp"

using namespace gapwave;

namespace {

std::vector<double> dense_levels(const HamiltonianOp& h) {
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h.dense(), Eigen::EigenvaluesOnly).eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

// H (x) I - I (x) H built entry by entry, row-major flattening p = i * n + j.
Eigen::MatrixXd kron_gap(const HamiltonianOp& h) {
  const Eigen::MatrixXd d = h.dense();
  const Eigen::Index n = d.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index a = 0; a < n; ++a) {
        k(i * n + j, a * n + j) += d(i, a);
        k(i * n + j, i * n + a) -= d(j, a);
      }
  return k;
}

}  // namespace

TEST_CASE("eigensolve agrees with a dense solver and is orthonormal under the weighted product") {
  const Grid g = make_grid(-6.0, 6.0, 60);
  const HamiltonianOp h = build_hamiltonian(g, potentials::DoubleWell{4.0, 3.0}, {0.9, 1.2});
  const EigenSystem es = eigensolve(h);
  const auto want = dense_levels(h);
  REQUIRE(es.size() == 60);
  for (std::size_t k = 0; k < 60; ++k) CHECK(es.energies[k] == doctest::Approx(want[k]).epsilon(1e-11));
  const Eigen::MatrixXcd b = es.basis();
  CHECK((g.dx * b.adjoint() * b - Eigen::MatrixXcd::Identity(60, 60)).cwiseAbs().maxCoeff() < 1e-12);
  for (std::size_t k = 0; k < 60; k += 7) {
    const WaveFunction hv = apply_hamiltonian(h, es.states[k]);
    CHECK((hv.values - es.energies[k] * es.states[k].values).norm() < 1e-10 * h.spectral_bound());
  }
}

TEST_CASE("lowest-k eigensolve returns the bottom of the spectrum") {
  const Grid g = make_grid(0.0, 1.0, 30);
  const HamiltonianOp h = build_hamiltonian(g, potentials::Box{});
  const EigenSystem es = eigensolve(h, 4);
  REQUIRE(es.size() == 4);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(es.energies[k] == doctest::Approx(test::discrete_box_level(g, k + 1)).epsilon(1e-12));
  CHECK_THROWS_AS(eigensolve(h, 0), InvalidArgument);
  CHECK_THROWS_AS(eigensolve(h, 31), InvalidArgument);
}

TEST_CASE("oscillator levels approach n + 1/2") {
  const Grid g = make_grid(-10.0, 10.0, 400);
  const EigenSystem es = eigensolve(build_hamiltonian(g, potentials::HarmonicOscillator{1.0}), 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(es.energies[k] - (k + 0.5)) < 5e-3);
}

TEST_CASE("matrix-free gap operator equals the Kronecker matrix") {
  std::mt19937_64 rng(31);
  const Grid g = make_grid(-2.0, 2.0, 9);
  const HamiltonianOp h = build_hamiltonian(g, potentials::HarmonicOscillator{2.0});
  const BipartiteWave psi = random_bipartite(g, rng);
  const Eigen::MatrixXd k = kron_gap(h);
  // Row-major flatten of amplitudes.
  Eigen::VectorXcd flat(81);
  for (Eigen::Index i = 0; i < 9; ++i)
    for (Eigen::Index j = 0; j < 9; ++j) flat[i * 9 + j] = psi.amplitudes(i, j);
  const Eigen::VectorXcd want = k.cast<cd>() * flat;
  const BipartiteWave got = gap_operator_apply(h, psi);
  for (Eigen::Index i = 0; i < 9; ++i)
    for (Eigen::Index j = 0; j < 9; ++j) CHECK(std::abs(got.amplitudes(i, j) - want[i * 9 + j]) < 1e-12);
}

TEST_CASE("direct gap spectrum equals all differences of dense eigenvalues") {
  const Grid g = make_grid(-5.0, 5.0, 12);
  const HamiltonianOp h = build_hamiltonian(g, potentials::DoubleWell{5.0, 4.0});
  const auto e = dense_levels(h);
  std::vector<double> want;
  for (double a : e)
    for (double b : e) want.push_back(a - b);
  std::sort(want.begin(), want.end());
  const GapSpectrum d = gap_spectrum_direct(h);
  REQUIRE(d.gaps.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(std::abs(d.gaps[k] - want[k]) < 1e-10);
  CHECK_FALSE(d.attributed());
  std::size_t total = 0;
  for (const auto& c : d.clusters) total += c.multiplicity;
  CHECK(total == want.size());
  CHECK(d.multiplicity_at(want.size() / 2) >= 12);  // the zero cluster
}

TEST_CASE("direct solve refuses grids beyond the cap with a pointer to the pairwise route") {
  const HamiltonianOp h = build_hamiltonian(make_grid(0.0, 1.0, 20), potentials::Box{});
  try {
    (void)gap_spectrum_direct(h, {10, std::nullopt});
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("gap_spectrum_pairwise") != std::string::npos);
  }
}

TEST_CASE("pairwise spectrum is sorted and attributed") {
  const Grid g = make_grid(-3.0, 3.0, 10);
  const EigenSystem es = eigensolve(build_hamiltonian(g, potentials::HarmonicOscillator{1.0}));
  const GapSpectrum p = gap_spectrum_pairwise(es);
  REQUIRE(p.gaps.size() == 100);
  REQUIRE(p.attributions.size() == 100);
  CHECK(std::is_sorted(p.gaps.begin(), p.gaps.end()));
  for (std::size_t k = 0; k < 100; ++k) {
    const GapPair pr = *p.attributions[k];
    CHECK(p.gaps[k] == es.energies[pr.n] - es.energies[pr.m]);
  }
  CHECK(p.multiplicity_at(50) == 10);
  CHECK_THROWS_AS(p.multiplicity_at(100), InvalidArgument);
}

TEST_CASE("clustering merges chains of close values") {
  const std::vector<double> v{0.0, 0.5, 0.55, 0.6, 2.0};
  const auto c = cluster_gaps(v, 0.06);
  REQUIRE(c.size() == 3);
  CHECK(c[1].multiplicity == 3);
  CHECK(c[1].lambda == doctest::Approx(0.55));
  CHECK(cluster_gaps(v, 0.0).size() == 5);
}

TEST_CASE("match_spectra pairs multisets and reports leftovers") {
  GapSpectrum a, b;
  a.gaps = {-1.0, 0.0, 0.0, 1.0};
  b.gaps = {-1.0 + 1e-10, 0.0, 0.0, 1.0};
  auto r = match_spectra(a, b, 1e-8);
  CHECK(r.matched);
  CHECK(r.pairs.size() == 4);
  CHECK(r.max_abs_deviation == doctest::Approx(1e-10));

  b.gaps = {-1.0, 0.0, 1.0, 2.0};
  r = match_spectra(a, b, 1e-8);
  CHECK_FALSE(r.matched);
  CHECK(r.residuals_a == std::vector<double>{0.0});
  CHECK(r.residuals_b == std::vector<double>{2.0});

  b.gaps = {-1.0, 0.0, 0.0};
  r = match_spectra(a, b, 1e-8);
  CHECK_FALSE(r.matched);
  CHECK(r.residuals_a.size() == 1);

  CHECK_THROWS_AS(match_spectra(a, b, 0.0), InvalidArgument);
  CHECK_THROWS_AS(match_spectra(a, b, -1.0), InvalidArgument);
}

TEST_CASE("attribution copies level pairs through a match") {
  const Grid g = make_grid(-4.0, 4.0, 8);
  const HamiltonianOp h = build_hamiltonian(g, potentials::HarmonicOscillator{1.0});
  const GapSpectrum p = gap_spectrum_pairwise(eigensolve(h));
  GapSpectrum d = gap_spectrum_direct(h);
  const MatchReport r = match_spectra(d, p, 1e-8);
  REQUIRE(r.matched);
  attribute_by_value(d, p, r);
  for (std::size_t k = 0; k < d.gaps.size(); ++k) REQUIRE(d.attributions[k].has_value());
  CHECK_THROWS_AS(attribute_by_value(d, GapSpectrum{}, r), InvalidArgument);
}

TEST_CASE("stationary products are eigenvectors of the gap operator") {
  const Grid g = make_grid(-5.0, 5.0, 24);
  const HamiltonianOp h = build_hamiltonian(g, potentials::HarmonicOscillator{1.0});
  const EigenSystem es = eigensolve(h);
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{0, 0}, {1, 0}, {3, 7}, {23, 2}}) {
    const BipartiteWave psi = stationary_bipartite(es, n, m);
    CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-14));
    BipartiteWave k = gap_operator_apply(h, psi);
    k.amplitudes -= (es.energies[n] - es.energies[m]) * psi.amplitudes;
    CHECK(norm(k) < 1e-10 * h.spectral_bound());
  }
  CHECK_THROWS_AS(stationary_bipartite(es, 24, 0), InvalidArgument);
}

TEST_CASE("stationary products form a complete basis") {
  std::mt19937_64 rng(2);
  const Grid g = make_grid(-3.0, 3.0, 14);
  const EigenSystem es = eigensolve(build_hamiltonian(g, potentials::Free{}));
  const BipartiteWave psi = random_bipartite(g, rng);
  const Eigen::MatrixXcd c = expand_bipartite(es, psi);
  CHECK(distance(resum_bipartite(es, c), psi) < 1e-12);
  CHECK(c.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));  // Parseval
  const Eigen::MatrixXcd unit = expand_bipartite(es, stationary_bipartite(es, 2, 5));
  CHECK(std::abs(unit(2, 5) - 1.0) < 1e-12);
  CHECK(unit.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-10));
}
