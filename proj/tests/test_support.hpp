#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "gapwave/bipartite.hpp"
#include "gapwave/hamiltonian.hpp"

namespace gapwave::test {

// Dense Cayley factor (I + i tau H)^-1 (I - i tau H) from an LU solve.
inline Eigen::MatrixXcd dense_cayley(const HamiltonianOp& h, double dt) {
  const Eigen::MatrixXcd hd = h.dense().cast<cd>();
  const cd tau(0.0, dt / (2.0 * h.constants.hbar));
  const Eigen::Index n = hd.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  return (id + tau * hd).partialPivLu().solve(id - tau * hd);
}

// Discrete Dirichlet Laplacian eigenvalue k (1-based) of the free stencil.
inline double discrete_box_level(const Grid& g, std::size_t k, const PhysicalConstants& c = {}) {
  const double theta = static_cast<double>(k) * 3.14159265358979323846 / static_cast<double>(g.n_points + 1);
  return c.hbar * c.hbar / (c.mass * g.dx * g.dx) * (1.0 - std::cos(theta));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gapwave-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace gapwave::test
