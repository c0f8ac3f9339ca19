#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gapwave/bipartite.hpp"
#include "gapwave/hamiltonian.hpp"
#include "gapwave/kernels.hpp"
#include "gapwave/spectrum.hpp"

namespace gapwave {

struct PropagationConfig {
  double dt = 0.01;
  std::size_t n_steps = 1;
  std::size_t record_every = 1;
};

void validate_propagation(const PropagationConfig& cfg);

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> norms;
};

/// Crank-Nicolson (Cayley) step for i hbar dpsi/dt = H psi:
/// (1 + i dt H / 2hbar) psi' = (1 - i dt H / 2hbar) psi.
class CrankNicolson {
 public:
  CrankNicolson(const HamiltonianOp& h, double dt);

  void step(WaveFunction& psi) const;
  // Advance every column of a column-major rows x cols block along x.
  void step_columns(std::span<cd> data, std::size_t rows, std::size_t cols) const;
  // Same step with H replaced by -H, applied along the y index of each row.
  void step_rows_conjugate(std::span<cd> data, std::size_t rows, std::size_t cols) const;

  const Grid& grid() const { return grid_; }
  double dt() const { return dt_; }

 private:
  Grid grid_;
  double dt_;
  kernels::Tridiag explicit_;       // 1 - i tau H
  kernels::TridiagLU implicit_;     // (1 + i tau H)
  kernels::Tridiag explicit_conj_;  // 1 + i tau H
  kernels::TridiagLU implicit_conj_;
  mutable std::vector<cd> scratch_;
};

/// Bipartite stepper: Psi' = C Psi C^dagger with C the one-body Cayley map.
/// The x factor (with +H) and the y factor (with -H) commute, so one batched
/// tridiagonal solve per direction advances the whole state.
class BipartiteCrankNicolson {
 public:
  BipartiteCrankNicolson(const HamiltonianOp& h, double dt);
  void step(BipartiteWave& psi);

 private:
  CrankNicolson one_body_;
};

using OneBodyObserver = std::function<void(std::size_t step, double t, const WaveFunction&)>;
using BipartiteObserver = std::function<void(std::size_t step, double t, const BipartiteWave&)>;

// Observers fire at step 0, every record_every steps, and at the final step.
void propagate_schrodinger(const HamiltonianOp& h, const WaveFunction& psi0, const PropagationConfig& cfg,
                           const OneBodyObserver& observe);
Trajectory<WaveFunction> propagate_schrodinger(const HamiltonianOp& h, const WaveFunction& psi0,
                                               const PropagationConfig& cfg);

void propagate_bipartite_direct(const HamiltonianOp& h, const BipartiteWave& psi0, const PropagationConfig& cfg,
                                const BipartiteObserver& observe);
Trajectory<BipartiteWave> propagate_bipartite_direct(const HamiltonianOp& h, const BipartiteWave& psi0,
                                                     const PropagationConfig& cfg);

// Spectrally exact e^{-iHt/hbar} Psi0 e^{iHt/hbar}; es must hold every level.
BipartiteWave propagate_bipartite_factored(const EigenSystem& es, const BipartiteWave& psi0, double t);
BipartiteWave propagate_bipartite_factored(const HamiltonianOp& h, const BipartiteWave& psi0, double t);

// One-body analogue, sum_n e^{-iE_n t/hbar} <psi_n, psi0> psi_n.
WaveFunction propagate_spectral(const EigenSystem& es, const WaveFunction& psi0, double t);

// Phase velocity the Cayley map gives an eigenvalue E: (2hbar/dt) atan(E dt / 2hbar).
double cn_phase_rate(double energy, double dt, double hbar);
// Rate at which psi_n psi_m* rotates under BipartiteCrankNicolson.
double cn_mapped_gap(double e_n, double e_m, double dt, double hbar);
// Invert cn_mapped_gap for E_n - E_m given the fitted rate and the known E_m.
double demap_gap(double fitted_gap, double e_m, double dt, double hbar);

// Throws InvalidArgument unless |gap| * record_every * dt / hbar < pi.
void check_phase_cadence(double gap, const PropagationConfig& cfg, double hbar);

struct PhaseSeries {
  std::vector<double> times;
  std::vector<cd> overlaps;  // <reference, Psi(t)> / (||reference|| ||Psi(t)||)
};

PhaseSeries overlap_series(const Trajectory<BipartiteWave>& traj, const BipartiteWave& reference);

// Least-squares slope of the unwrapped overlap phase, returned as -hbar * slope.
// Every |overlap| must be >= 0.99 and at least 3 samples are needed.
double extract_gap_from_phase(const PhaseSeries& series, double hbar);
double extract_gap_from_phase(const Trajectory<BipartiteWave>& traj, const BipartiteWave& reference,
                              double hbar);

}  // namespace gapwave
