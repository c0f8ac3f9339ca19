#include "gapwave/grid.hpp"

#include <cmath>
#include <string>

#include "gapwave/bipartite.hpp"
#include "gapwave/error.hpp"

namespace gapwave {

Eigen::VectorXd Grid::sites() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(n_points));
  for (std::size_t i = 0; i < n_points; ++i) x[static_cast<Eigen::Index>(i)] = site(i);
  return x;
}

Grid make_grid(double x_min, double x_max, std::size_t n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max))
    throw InvalidArgument("make_grid: bounds must be finite");
  if (!(x_max > x_min)) throw InvalidArgument("make_grid: x_max must exceed x_min");
  if (n_points < 2) throw InvalidArgument("make_grid: n_points must be at least 2");
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n_points = n_points;
  g.dx = (x_max - x_min) / static_cast<double>(n_points + 1);
  if (!(g.dx > 0.0)) throw InvalidArgument("make_grid: spacing underflows to zero");
  return g;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a == b) return;
  throw GridMismatch(std::string(where) + ": grid mismatch (" + std::to_string(a.n_points) +
                     " vs " + std::to_string(b.n_points) + " sites)");
}

void validate_constants(const PhysicalConstants& c) {
  if (!(c.hbar > 0.0) || !std::isfinite(c.hbar)) throw InvalidArgument("hbar must be positive");
  if (!(c.mass > 0.0) || !std::isfinite(c.mass)) throw InvalidArgument("mass must be positive");
}

WaveFunction WaveFunction::zeros(const Grid& g) {
  return {g, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g.n_points))};
}

cd inner_product(const WaveFunction& f, const WaveFunction& g) {
  require_same_grid(f.grid, g.grid, "inner_product");
  return f.grid.dx * f.values.dot(g.values);  // Eigen's dot conjugates the left operand
}

double norm(const WaveFunction& f) { return std::sqrt(f.grid.dx) * f.values.norm(); }

WaveFunction normalized(const WaveFunction& f) {
  const double n = norm(f);
  if (!(n > 0.0)) throw InvalidArgument("cannot normalize a zero wave function");
  return {f.grid, f.values / n};
}

WaveFunction random_wave(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  WaveFunction w = WaveFunction::zeros(g);
  for (auto& v : w.values) v = cd(gauss(rng), gauss(rng));
  return normalized(w);
}

// --- bipartite -------------------------------------------------------------

BipartiteWave BipartiteWave::zeros(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.n_points);
  return {g, Eigen::MatrixXcd::Zero(n, n)};
}

BipartiteWave BipartiteWave::outer(const WaveFunction& psi, const WaveFunction& phi) {
  require_same_grid(psi.grid, phi.grid, "BipartiteWave::outer");
  return {psi.grid, psi.values * phi.values.adjoint()};
}

double norm(const BipartiteWave& psi) { return psi.grid.dx * psi.amplitudes.norm(); }

BipartiteWave normalized(const BipartiteWave& psi) {
  const double n = norm(psi);
  if (!(n > 0.0)) throw InvalidArgument("cannot normalize a zero bipartite wave");
  return {psi.grid, psi.amplitudes / n};
}

cd inner_product(const BipartiteWave& a, const BipartiteWave& b) {
  require_same_grid(a.grid, b.grid, "inner_product");
  const double w = a.grid.dx * a.grid.dx;
  return w * (a.amplitudes.array().conjugate() * b.amplitudes.array()).sum();
}

double distance(const BipartiteWave& a, const BipartiteWave& b) {
  require_same_grid(a.grid, b.grid, "distance");
  return a.grid.dx * (a.amplitudes - b.amplitudes).norm();
}

bool all_finite(const BipartiteWave& psi) { return psi.amplitudes.allFinite(); }

BipartiteWave random_bipartite(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  BipartiteWave w = BipartiteWave::zeros(g);
  for (Eigen::Index j = 0; j < w.amplitudes.cols(); ++j)
    for (Eigen::Index i = 0; i < w.amplitudes.rows(); ++i)
      w.amplitudes(i, j) = cd(gauss(rng), gauss(rng));
  return normalized(w);
}

}  // namespace gapwave
