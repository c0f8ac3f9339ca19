#include "gapwave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "gapwave/error.hpp"
#include "gapwave/kernels.hpp"
#include "gapwave/tridiagonal_eigen.hpp"

namespace gapwave {

Eigen::MatrixXcd EigenSystem::basis() const {
  const auto n = static_cast<Eigen::Index>(grid.n_points);
  Eigen::MatrixXcd b(n, static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = states[k].values;
  return b;
}

EigenSystem eigensolve(const HamiltonianOp& h, std::optional<std::size_t> k) {
  const std::size_t n = h.size();
  const std::size_t levels = k.value_or(n);
  if (levels == 0 || levels > n)
    throw InvalidArgument("eigensolve: requested " + std::to_string(levels) + " levels from " +
                          std::to_string(n) + " sites");
  std::vector<double> off(n - 1, h.off_diagonal);
  std::vector<double> diag(h.diagonal.data(), h.diagonal.data() + n);
  const auto r = symmetric_tridiagonal_eigen(diag, off, true);

  EigenSystem es;
  es.grid = h.grid;
  es.constants = h.constants;
  es.energies.assign(r.values.begin(), r.values.begin() + static_cast<std::ptrdiff_t>(levels));
  const double inv_sqrt_dx = 1.0 / std::sqrt(h.grid.dx);
  es.states.reserve(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    WaveFunction w{h.grid, r.vectors.col(static_cast<Eigen::Index>(i)).cast<cd>() * inv_sqrt_dx};
    es.states.push_back(std::move(w));
  }
  return es;
}

BipartiteWave gap_operator_apply(const HamiltonianOp& h, const BipartiteWave& psi) {
  require_same_grid(h.grid, psi.grid, "gap_operator_apply");
  const std::size_t n = h.size();
  BipartiteWave out = BipartiteWave::zeros(psi.grid);
  std::span<const double> diag(h.diagonal.data(), n);
  kernels::omp::gap_apply(diag, h.off_diagonal, {psi.amplitudes.data(), n * n},
                          {out.amplitudes.data(), n * n}, n);
  return out;
}

std::size_t GapSpectrum::multiplicity_at(std::size_t k) const {
  std::size_t start = 0;
  for (const auto& c : clusters) {
    if (k < start + c.multiplicity) return c.multiplicity;
    start += c.multiplicity;
  }
  throw InvalidArgument("multiplicity_at: index out of range");
}

std::vector<GapCluster> cluster_gaps(std::span<const double> sorted_gaps, double tol) {
  std::vector<GapCluster> out;
  std::size_t i = 0;
  while (i < sorted_gaps.size()) {
    std::size_t j = i + 1;
    double sum = sorted_gaps[i];
    while (j < sorted_gaps.size() && sorted_gaps[j] - sorted_gaps[j - 1] <= tol) sum += sorted_gaps[j++];
    out.push_back({sum / static_cast<double>(j - i), j - i});
    i = j;
  }
  return out;
}

GapSpectrum gap_spectrum_direct(const HamiltonianOp& h, const DirectOptions& opts) {
  const std::size_t n = h.size();
  if (n > opts.max_points)
    throw InvalidArgument("gap_spectrum_direct: " + std::to_string(n) + " sites exceeds the dense cap of " +
                          std::to_string(opts.max_points) +
                          " (the operator has n^2 rows); use gap_spectrum_pairwise on an eigensolve instead");
  const std::size_t dim = n * n;
  Eigen::MatrixXd k(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  kernels::omp::gap_matrix({h.diagonal.data(), n}, h.off_diagonal, {k.data(), dim * dim}, n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("gap_spectrum_direct: dense eigensolver did not converge");

  GapSpectrum g;
  g.gaps.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
  std::sort(g.gaps.begin(), g.gaps.end());
  g.cluster_tol = opts.cluster_tol.value_or(1e-9 * h.spectral_bound());
  g.clusters = cluster_gaps(g.gaps, g.cluster_tol);
  return g;
}

GapSpectrum gap_spectrum_pairwise(const EigenSystem& es, std::optional<double> cluster_tol) {
  if (es.size() == 0) throw InvalidArgument("gap_spectrum_pairwise: empty eigensystem");
  const std::size_t n = es.size();
  struct Entry {
    double gap;
    GapPair pair;
  };
  std::vector<Entry> entries;
  entries.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) entries.push_back({es.energies[a] - es.energies[b], {a, b}});
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.gap != y.gap) return x.gap < y.gap;
    if (x.pair.n != y.pair.n) return x.pair.n < y.pair.n;
    return x.pair.m < y.pair.m;
  });

  GapSpectrum g;
  g.gaps.reserve(entries.size());
  g.attributions.reserve(entries.size());
  for (const auto& e : entries) {
    g.gaps.push_back(e.gap);
    g.attributions.emplace_back(e.pair);
  }
  double emax = 0.0;
  for (double e : es.energies) emax = std::max(emax, std::abs(e));
  g.cluster_tol = cluster_tol.value_or(1e-9 * emax);
  g.clusters = cluster_gaps(g.gaps, g.cluster_tol);
  return g;
}

MatchReport match_spectra(const GapSpectrum& a, const GapSpectrum& b, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("match_spectra: tolerance must be positive");
  MatchReport r;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.gaps.size() && j < b.gaps.size()) {
    const double dev = std::abs(a.gaps[i] - b.gaps[j]);
    if (dev <= tol) {
      r.pairs.emplace_back(i, j);
      r.max_abs_deviation = std::max(r.max_abs_deviation, dev);
      ++i;
      ++j;
    } else if (a.gaps[i] < b.gaps[j]) {
      r.residuals_a.push_back(a.gaps[i++]);
    } else {
      r.residuals_b.push_back(b.gaps[j++]);
    }
  }
  for (; i < a.gaps.size(); ++i) r.residuals_a.push_back(a.gaps[i]);
  for (; j < b.gaps.size(); ++j) r.residuals_b.push_back(b.gaps[j]);
  r.matched = r.residuals_a.empty() && r.residuals_b.empty();
  return r;
}

void attribute_by_value(GapSpectrum& target, const GapSpectrum& reference, const MatchReport& report) {
  if (!reference.attributed()) throw InvalidArgument("attribute_by_value: reference carries no attributions");
  target.attributions.assign(target.gaps.size(), std::nullopt);
  for (const auto& [ia, ib] : report.pairs) {
    if (ia >= target.gaps.size() || ib >= reference.gaps.size())
      throw InvalidArgument("attribute_by_value: report does not belong to these spectra");
    target.attributions[ia] = reference.attributions[ib];
  }
}

BipartiteWave stationary_bipartite(const EigenSystem& es, std::size_t n, std::size_t m) {
  if (n >= es.size() || m >= es.size())
    throw InvalidArgument("stationary_bipartite: level index out of range (have " +
                          std::to_string(es.size()) + " levels)");
  return normalized(BipartiteWave::outer(es.states[n], es.states[m]));
}

Eigen::MatrixXcd expand_bipartite(const EigenSystem& es, const BipartiteWave& psi) {
  require_same_grid(es.grid, psi.grid, "expand_bipartite");
  const Eigen::MatrixXcd b = es.basis();
  const double w = es.grid.dx * es.grid.dx;
  // conj(psi_n(i)) psi_m(j) Psi_ij summed: (B^H Psi B)_nm
  return w * (b.adjoint() * psi.amplitudes * b);
}

BipartiteWave resum_bipartite(const EigenSystem& es, const Eigen::MatrixXcd& coefficients) {
  if (coefficients.rows() != static_cast<Eigen::Index>(es.size()) || coefficients.cols() != coefficients.rows())
    throw InvalidArgument("resum_bipartite: coefficient matrix does not match level count");
  const Eigen::MatrixXcd b = es.basis();
  return {es.grid, b * coefficients * b.adjoint()};
}

}  // namespace gapwave
