#pragma once

#include <cstddef>
#include <vector>

#include "gapwave/bipartite.hpp"

namespace gapwave {

/// Psi(x, y) = sum_n mu_n psi_n(x) conj(phi_n(y)).
///
/// Right states are stored un-conjugated; reconstruct() applies the
/// conjugate. Both families are orthonormal under the weighted inner product.
struct SchmidtDecomposition {
  Grid grid;
  std::vector<double> coefficients;  // descending, non-negative
  std::vector<WaveFunction> left_states;
  std::vector<WaveFunction> right_states;

  std::size_t rank() const { return coefficients.size(); }
};

// Terms with mu_n <= rank_tol * mu_0 are dropped; rank_tol in [0, 1).
SchmidtDecomposition schmidt_decompose(const BipartiteWave& psi, double rank_tol = 1e-12);

BipartiteWave reconstruct(const SchmidtDecomposition& d);

std::size_t schmidt_rank(const BipartiteWave& psi, double rank_tol = 1e-12);

// Every singular value of Psi, descending (no truncation).
std::vector<double> schmidt_coefficients(const BipartiteWave& psi);

// -sum p ln p with p_n = mu_n^2; Psi must be normalized to 1e-8.
double entanglement_entropy(const BipartiteWave& psi);

}  // namespace gapwave
