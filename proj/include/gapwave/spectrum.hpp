#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gapwave/bipartite.hpp"
#include "gapwave/hamiltonian.hpp"

namespace gapwave {

/// Lowest eigenpairs of a HamiltonianOp; states are orthonormal under the
/// dx-weighted inner product.
struct EigenSystem {
  Grid grid;
  PhysicalConstants constants;
  std::vector<double> energies;
  std::vector<WaveFunction> states;

  std::size_t size() const { return energies.size(); }
  // Columns are the states.
  Eigen::MatrixXcd basis() const;
};

// k = nullopt means every level.
EigenSystem eigensolve(const HamiltonianOp& h, std::optional<std::size_t> k = std::nullopt);

// (H(x) - H(y)) Psi, matrix-free.
BipartiteWave gap_operator_apply(const HamiltonianOp& h, const BipartiteWave& psi);

struct GapPair {
  std::size_t n = 0;
  std::size_t m = 0;
  bool operator==(const GapPair&) const = default;
};

struct GapCluster {
  double lambda = 0.0;
  std::size_t multiplicity = 0;
};

/// Eigenvalues of the gap operator, ascending, with their clustering.
///
/// `attributions` is either empty or parallel to `gaps`; an entry holds the
/// level pair (n, m) with gaps[k] ~ E_n - E_m.
struct GapSpectrum {
  std::vector<double> gaps;
  std::vector<std::optional<GapPair>> attributions;
  std::vector<GapCluster> clusters;
  double cluster_tol = 0.0;

  // Multiplicity of the cluster containing gaps[k].
  std::size_t multiplicity_at(std::size_t k) const;
  bool attributed() const { return !attributions.empty(); }
};

// Single-linkage merge of neighbours closer than tol; cluster value is the mean.
std::vector<GapCluster> cluster_gaps(std::span<const double> sorted_gaps, double tol);

struct DirectOptions {
  std::size_t max_points = 64;
  std::optional<double> cluster_tol;  // default 1e-9 * spectral bound of H
};

// Dense diagonalization of H (x) I - I (x) H. Refuses grids above max_points.
GapSpectrum gap_spectrum_direct(const HamiltonianOp& h, const DirectOptions& opts = {});

// {E_n - E_m} over all ordered pairs, attributed, ascending.
// Default cluster_tol is 1e-9 * max|E|.
GapSpectrum gap_spectrum_pairwise(const EigenSystem& es, std::optional<double> cluster_tol = std::nullopt);

struct MatchReport {
  bool matched = false;
  double max_abs_deviation = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // indices into a.gaps, b.gaps
  std::vector<double> residuals_a;
  std::vector<double> residuals_b;
};

// Greedy two-pointer multiset matching of the sorted gap lists.
MatchReport match_spectra(const GapSpectrum& a, const GapSpectrum& b, double tol);

// Copy attributions from `reference` onto `target` through a match of (target, reference).
void attribute_by_value(GapSpectrum& target, const GapSpectrum& reference, const MatchReport& report);

// Normalized psi_n(x) psi_m*(y).
BipartiteWave stationary_bipartite(const EigenSystem& es, std::size_t n, std::size_t m);

// c_{nm} = <psi_n psi_m*, Psi>. Complete when es holds every level.
Eigen::MatrixXcd expand_bipartite(const EigenSystem& es, const BipartiteWave& psi);
BipartiteWave resum_bipartite(const EigenSystem& es, const Eigen::MatrixXcd& coefficients);

}  // namespace gapwave
