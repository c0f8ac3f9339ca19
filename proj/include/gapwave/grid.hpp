#pragma once

#include <complex>
#include <cstddef>
#include <random>

#include <Eigen/Dense>

namespace gapwave {

using cd = std::complex<double>;

/// Uniform 1D lattice with Dirichlet walls at x_min and x_max.
///
/// Only the n_points interior sites are stored; site i sits at
/// x_min + (i + 1) * dx with dx = (x_max - x_min) / (n_points + 1).
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n_points = 0;
  double dx = 0.0;

  double site(std::size_t i) const { return x_min + static_cast<double>(i + 1) * dx; }
  Eigen::VectorXd sites() const;
  std::size_t size() const { return n_points; }

  bool operator==(const Grid&) const = default;
};

Grid make_grid(double x_min, double x_max, std::size_t n_points);

// Throws GridMismatch naming `where` when a and b differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
};

void validate_constants(const PhysicalConstants& c);

/// One-partite state psi sampled on a grid.
struct WaveFunction {
  Grid grid;
  Eigen::VectorXcd values;

  static WaveFunction zeros(const Grid& g);
};

// dx * sum conj(f_i) g_i
cd inner_product(const WaveFunction& f, const WaveFunction& g);
double norm(const WaveFunction& f);
WaveFunction normalized(const WaveFunction& f);

// Complex Gaussian entries, normalized under the weighted norm.
WaveFunction random_wave(const Grid& g, std::mt19937_64& rng);

}  // namespace gapwave
