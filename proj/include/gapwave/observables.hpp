#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gapwave/bipartite.hpp"
#include "gapwave/hamiltonian.hpp"

namespace gapwave {

namespace observables {

struct Position {};

// -i hbar times the central difference (Dirichlet ends).
struct Momentum {
  double hbar = 1.0;
};

struct Energy {
  HamiltonianOp hamiltonian;
};

struct DiagonalTabulated {
  std::vector<double> values;
};

// Build through dense_observable() so Hermiticity is checked.
struct DenseMatrix {
  Eigen::MatrixXcd matrix;
};

}  // namespace observables

using LinearObservable = std::variant<observables::Position, observables::Momentum, observables::Energy,
                                      observables::DiagonalTabulated, observables::DenseMatrix>;

// Rejects matrices that are not Hermitian to 1e-10 (relative to their size).
LinearObservable dense_observable(Eigen::MatrixXcd m);

// O acting on each column of a block of samples on `g`.
Eigen::MatrixXcd apply_observable(const LinearObservable& o, const Grid& g, const Eigen::MatrixXcd& block);
WaveFunction apply_observable(const LinearObservable& o, const WaveFunction& psi);
Eigen::MatrixXcd observable_matrix(const LinearObservable& o, const Grid& g);

// <psi|O|psi> for a one-partite state.
double one_body_expectation(const WaveFunction& psi, const LinearObservable& o);

/// Integral operator with kernel Psi: (rho phi)(x) = dx sum_j Psi(x, y_j) phi(y_j).
struct DensityOperator {
  Grid grid;
  Eigen::MatrixXcd matrix;  // dx * Psi, acting on sample vectors

  WaveFunction apply(const WaveFunction& phi) const;
};

DensityOperator rho_of(const BipartiteWave& psi);

struct ExpectationValue {
  double raw = 0.0;           // Tr[rho^dag O rho]
  double trace_weight = 0.0;  // Tr[rho^dag rho]
  double renormalized = 0.0;  // raw / trace_weight
};

// Psi must be normalized to 1e-8; the imaginary part of the trace must stay
// below 1e-10 (scaled by max(1, |raw|)), otherwise O is treated as non-Hermitian.
ExpectationValue expectation_detail(const BipartiteWave& psi, const LinearObservable& o);
double expectation(const BipartiteWave& psi, const LinearObservable& o);

// Tr[(rho^dag rho)^2] / Tr[rho^dag rho]^2, i.e. sum mu^4 / (sum mu^2)^2.
double purity(const BipartiteWave& psi);

// diag(rho rho^dag) per site, scaled so dx * sum = 1.
Eigen::VectorXd position_density(const BipartiteWave& psi);

/// Gaussian slit amplitude  amplitude * N exp(-(x-c)^2 / 4 sigma^2) exp(i k x).
struct SlitSpec {
  double center = 0.0;
  double width = 1.0;
  double transverse_momentum = 0.0;
  double amplitude = 1.0;
};

// Throws InvalidArgument when more than 1e-8 of |phi|^2 falls outside the grid.
WaveFunction slit_wave(const Grid& g, const SlitSpec& slit);

enum class SlitMode { Wave, Particle };

// Wave: (phi1 + phi2)(phi1 + phi2)*. Particle: phi1 phi1* + phi2 phi2*. Normalized.
BipartiteWave build_double_slit(const Grid& g, const SlitSpec& slit1, const SlitSpec& slit2, SlitMode mode);
BipartiteWave double_slit_from_states(const WaveFunction& phi1, const WaveFunction& phi2, SlitMode mode);

// Same densities straight from the slit states, without forming Psi.
Eigen::VectorXd double_slit_density(const WaveFunction& phi1, const WaveFunction& phi2, SlitMode mode);

/// Mean (max - min) / (max + min) over consecutive local extrema of `density`
/// with lo <= x <= hi. Fewer than 3 extrema gives nullopt.
std::optional<double> fringe_visibility(const Grid& g, std::span<const double> density, double lo, double hi);

}  // namespace gapwave
