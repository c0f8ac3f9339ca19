#include <doctest.h>

#include <cmath>
#include <random>

#include "gapwave/bipartite.hpp"
#include "gapwave/error.hpp"
#include "gapwave/grid.hpp"

using namespace gapwave;

TEST_CASE("grid sites sit strictly inside the walls") {
  const Grid g = make_grid(-1.0, 1.0, 9);
  CHECK(g.dx == doctest::Approx(0.2));
  CHECK(g.site(0) == doctest::Approx(-0.8));
  CHECK(g.site(8) == doctest::Approx(0.8));
  CHECK(g.sites().size() == 9);
}

TEST_CASE("grid construction rejects degenerate input") {
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 8), InvalidArgument);
  CHECK_THROWS_AS(make_grid(2.0, 1.0, 8), InvalidArgument);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(make_grid(0.0, NAN, 8), InvalidArgument);
  CHECK_THROWS_AS(make_grid(-INFINITY, 1.0, 8), InvalidArgument);
}

TEST_CASE("constants must be positive and finite") {
  CHECK_NOTHROW(validate_constants({}));
  CHECK_THROWS_AS(validate_constants({0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(validate_constants({1.0, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(validate_constants({INFINITY, 1.0}), InvalidArgument);
}

TEST_CASE("mismatched grids are refused") {
  const Grid a = make_grid(0.0, 1.0, 8), b = make_grid(0.0, 1.0, 9);
  CHECK_NOTHROW(require_same_grid(a, a, "t"));
  CHECK_THROWS_AS(require_same_grid(a, b, "t"), GridMismatch);
  CHECK_THROWS_AS(inner_product(WaveFunction::zeros(a), WaveFunction::zeros(b)), GridMismatch);
}

TEST_CASE("weighted inner product matches a hand-computed sum") {
  const Grid g = make_grid(0.0, 3.0, 2);
  WaveFunction f = WaveFunction::zeros(g), h = WaveFunction::zeros(g);
  f.values << cd(1, 1), cd(0, 2);
  h.values << cd(2, 0), cd(1, -1);
  // conj(1+i)*2 + conj(2i)*(1-i) = (2-2i) + (-2i)(1-i) = 2-2i-2i-2 = -4i; times dx = 1
  const cd ip = inner_product(f, h);
  CHECK(ip.real() == doctest::Approx(0.0));
  CHECK(ip.imag() == doctest::Approx(-4.0));
}

TEST_CASE("inner product is conjugate symmetric and linear in the second slot") {
  std::mt19937_64 rng(3);
  const Grid g = make_grid(-4.0, 4.0, 50);
  for (int trial = 0; trial < 10; ++trial) {
    const WaveFunction f = random_wave(g, rng), h = random_wave(g, rng), k = random_wave(g, rng);
    CHECK(std::abs(inner_product(f, h) - std::conj(inner_product(h, f))) < 1e-14);
    const cd a(0.5, 2.0), b(-1.5, 0.25);
    const WaveFunction mix{g, a * h.values + b * k.values};
    CHECK(std::abs(inner_product(f, mix) - a * inner_product(f, h) - b * inner_product(f, k)) < 1e-13);
    CHECK(norm(f) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("normalizing the zero state fails") {
  const Grid g = make_grid(0.0, 1.0, 4);
  CHECK_THROWS_AS(normalized(WaveFunction::zeros(g)), InvalidArgument);
  CHECK_THROWS_AS(normalized(BipartiteWave::zeros(g)), InvalidArgument);
}

TEST_CASE("bipartite norm and inner product carry the area weight") {
  std::mt19937_64 rng(5);
  const Grid g = make_grid(-2.0, 2.0, 12);
  const WaveFunction psi = random_wave(g, rng), phi = random_wave(g, rng);
  const BipartiteWave p = BipartiteWave::outer(psi, phi);
  CHECK(p.amplitudes(2, 3) == psi.values[2] * std::conj(phi.values[3]));
  CHECK(norm(p) == doctest::Approx(norm(psi) * norm(phi)).epsilon(1e-14));
  const BipartiteWave q = random_bipartite(g, rng);
  CHECK(norm(q) == doctest::Approx(1.0).epsilon(1e-14));
  const cd direct = g.dx * g.dx * (p.amplitudes.conjugate().cwiseProduct(q.amplitudes)).sum();
  CHECK(std::abs(inner_product(p, q) - direct) < 1e-15);
  CHECK(distance(q, q) == 0.0);
  CHECK(all_finite(q));
  BipartiteWave bad = q;
  bad.amplitudes(0, 0) = cd(NAN, 0.0);
  CHECK_FALSE(all_finite(bad));
}

TEST_CASE("random states are reproducible from the seed") {
  const Grid g = make_grid(0.0, 1.0, 16);
  std::mt19937_64 a(11), b(11);
  CHECK(random_wave(g, a).values == random_wave(g, b).values);
}
