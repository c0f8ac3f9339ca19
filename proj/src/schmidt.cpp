#include "gapwave/schmidt.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "gapwave/error.hpp"

namespace gapwave {

namespace {

// SVD of dx * A, so singular values are the Schmidt coefficients and
// singular vectors / sqrt(dx) are orthonormal under the weighted product.
Eigen::BDCSVD<Eigen::MatrixXcd> weighted_svd(const BipartiteWave& psi, bool vectors) {
  if (!all_finite(psi)) throw InvalidArgument("schmidt: bipartite wave has non-finite entries");
  const unsigned flags = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(psi.grid.dx * psi.amplitudes, flags);
  if (svd.info() != Eigen::Success) throw ConvergenceError("schmidt: SVD did not converge");
  return svd;
}

}  // namespace

SchmidtDecomposition schmidt_decompose(const BipartiteWave& psi, double rank_tol) {
  if (!(rank_tol >= 0.0 && rank_tol < 1.0)) throw InvalidArgument("schmidt_decompose: rank_tol must lie in [0, 1)");
  const auto svd = weighted_svd(psi, true);
  const auto& s = svd.singularValues();
  SchmidtDecomposition d;
  d.grid = psi.grid;
  if (s.size() == 0) return d;
  const double cutoff = rank_tol * s[0];
  const double inv_sqrt_dx = 1.0 / std::sqrt(psi.grid.dx);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (!(s[k] > cutoff)) break;
    d.coefficients.push_back(s[k]);
    d.left_states.push_back({psi.grid, svd.matrixU().col(k) * inv_sqrt_dx});
    d.right_states.push_back({psi.grid, svd.matrixV().col(k) * inv_sqrt_dx});
  }
  return d;
}

BipartiteWave reconstruct(const SchmidtDecomposition& d) {
  if (d.left_states.size() != d.coefficients.size() || d.right_states.size() != d.coefficients.size())
    throw InvalidArgument("reconstruct: coefficient and state counts differ");
  BipartiteWave out = BipartiteWave::zeros(d.grid);
  for (std::size_t k = 0; k < d.coefficients.size(); ++k) {
    require_same_grid(d.grid, d.left_states[k].grid, "reconstruct");
    require_same_grid(d.grid, d.right_states[k].grid, "reconstruct");
    out.amplitudes.noalias() += d.coefficients[k] * d.left_states[k].values * d.right_states[k].values.adjoint();
  }
  return out;
}

std::vector<double> schmidt_coefficients(const BipartiteWave& psi) {
  const auto svd = weighted_svd(psi, false);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t schmidt_rank(const BipartiteWave& psi, double rank_tol) {
  if (!(rank_tol >= 0.0 && rank_tol < 1.0)) throw InvalidArgument("schmidt_rank: rank_tol must lie in [0, 1)");
  const auto mu = schmidt_coefficients(psi);
  if (mu.empty()) return 0;
  std::size_t r = 0;
  while (r < mu.size() && mu[r] > rank_tol * mu[0]) ++r;
  return r;
}

double entanglement_entropy(const BipartiteWave& psi) {
  const double n = norm(psi);
  if (std::abs(n - 1.0) > 1e-8)
    throw InvalidArgument("entanglement_entropy: state is not normalized (norm " + std::to_string(n) + ")");
  double h = 0.0;
  for (double mu : schmidt_coefficients(psi)) {
    const double p = mu * mu;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace gapwave
