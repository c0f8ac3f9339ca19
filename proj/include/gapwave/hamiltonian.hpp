#pragma once

#include <filesystem>
#include <string_view>
#include <variant>
#include <vector>

#include "gapwave/grid.hpp"

namespace gapwave {

namespace potentials {

struct Free {};

// U = m omega^2 x^2 / 2
struct HarmonicOscillator {
  double omega = 1.0;
};

// U = 0 inside; the walls are the Dirichlet boundary itself.
struct Box {};

// U = barrier_height * (x^2/a^2 - 1)^2 with a = well_separation / 2
struct DoubleWell {
  double barrier_height = 1.0;
  double well_separation = 2.0;
};

// One energy per lattice site.
struct Tabulated {
  std::vector<double> values;
};

}  // namespace potentials

using Potential = std::variant<potentials::Free, potentials::HarmonicOscillator, potentials::Box,
                               potentials::DoubleWell, potentials::Tabulated>;

std::string_view potential_name(const Potential& u);

// U(x_i) at every lattice site.
Eigen::VectorXd evaluate_potential(const Potential& u, const Grid& g, const PhysicalConstants& c);

/// Three-point finite-difference Hamiltonian -hbar^2/(2m) d^2/dx^2 + U(x).
///
/// Real symmetric tridiagonal: diagonal[i] = hbar^2/(m dx^2) + U(x_i) and a
/// uniform off-diagonal -hbar^2/(2 m dx^2).
struct HamiltonianOp {
  Grid grid;
  PhysicalConstants constants;
  Eigen::VectorXd diagonal;
  double off_diagonal = 0.0;

  std::size_t size() const { return grid.n_points; }
  Eigen::MatrixXd dense() const;
  // Gershgorin bound on the spectral radius.
  double spectral_bound() const;
};

HamiltonianOp build_hamiltonian(const Grid& g, const Potential& u, const PhysicalConstants& c = {});

WaveFunction apply_hamiltonian(const HamiltonianOp& h, const WaveFunction& psi);

// Two-column text file "position energy"; positions must hit the lattice
// sites to 1e-9 dx. Blank lines and '#' comments are skipped.
potentials::Tabulated load_tabulated_potential(const std::filesystem::path& file, const Grid& g);

}  // namespace gapwave
