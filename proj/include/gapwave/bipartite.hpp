#pragma once

#include <random>

#include "gapwave/grid.hpp"

namespace gapwave {

/// Bipartite wave function Psi(x_i, y_j) on a shared grid.
///
/// Entry (i, j) of `amplitudes` is Psi(x_i, y_j); the first index is the
/// x coordinate. The norm carries the area weight: ||Psi||^2 = dx^2 sum |Psi_ij|^2.
struct BipartiteWave {
  Grid grid;
  Eigen::MatrixXcd amplitudes;

  static BipartiteWave zeros(const Grid& g);
  // psi(x) phi*(y)
  static BipartiteWave outer(const WaveFunction& psi, const WaveFunction& phi);
};

double norm(const BipartiteWave& psi);
BipartiteWave normalized(const BipartiteWave& psi);
// dx^2 sum conj(a_ij) b_ij
cd inner_product(const BipartiteWave& a, const BipartiteWave& b);
// Weighted Frobenius distance ||a - b||.
double distance(const BipartiteWave& a, const BipartiteWave& b);
bool all_finite(const BipartiteWave& psi);

BipartiteWave random_bipartite(const Grid& g, std::mt19937_64& rng);

}  // namespace gapwave
