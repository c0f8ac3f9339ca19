#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gapwave/config.hpp"
#include "gapwave/dynamics.hpp"
#include "gapwave/io.hpp"
#include "gapwave/observables.hpp"
#include "gapwave/spectrum.hpp"

namespace gapwave {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitScientificFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandContext {
  std::filesystem::path out_dir = "gapwave-out";
  std::optional<std::uint64_t> seed;  // overrides any seed in the config
  std::ostream* log = nullptr;         // progress lines; nullptr is silent
};

inline constexpr std::uint64_t kDefaultSeed = 20240601;

// Built-in scenario text: "doubleslit", "stationary-phase", "harmonic-gaps".
std::string_view builtin_scenario(std::string_view name);

// --- gaps -------------------------------------------------------------------

struct GapsResult {
  Grid grid;
  std::string potential;
  EigenSystem eigensystem;
  GapSpectrum pairwise;
  std::optional<GapSpectrum> direct;
  std::optional<MatchReport> match;
  double match_tol = 1e-8;
  std::size_t direct_cap = 64;
};

GapsResult run_gaps(const ScenarioConfig& cfg);
int cmd_gaps(const ScenarioConfig& cfg, const CommandContext& ctx);

// --- evolve -----------------------------------------------------------------

struct ConvergenceRow {
  double dt = 0.0;
  std::size_t steps = 0;
  double error = 0.0;
};

// Least-squares slope of log(error) against log(dt).
double convergence_order(const std::vector<ConvergenceRow>& rows);

struct EvolveResult {
  std::string mode;     // "bipartite" or "one_body"
  std::string initial;  // "eigen" or "file"
  PropagationConfig propagation;
  std::vector<io::TrajectoryRow> rows;
  double initial_norm = 0.0;
  double max_norm_drift = 0.0;

  // Stationary bipartite runs started from psi_n psi_m*.
  std::optional<std::size_t> n, m;
  std::optional<double> eigensolve_gap;  // E_n - E_m
  std::optional<double> cn_gap;          // rate predicted through the Cayley map
  std::optional<double> fitted_gap;      // -hbar * phase slope
  std::optional<double> demapped_gap;    // fitted rate mapped back to E_n - E_m
  double gap_tol = 1e-6;

  std::vector<ConvergenceRow> convergence;
  std::optional<double> convergence_order;

  bool passed() const;
};

// `snapshots`, when set, receives every recorded state.
EvolveResult run_evolve(const ScenarioConfig& cfg, const std::filesystem::path* snapshots = nullptr);
int cmd_evolve(const ScenarioConfig& cfg, const CommandContext& ctx);

// --- schmidt ----------------------------------------------------------------

BipartiteWave build_configured_state(const ScenarioConfig& cfg, std::uint64_t seed);
int cmd_schmidt(const ScenarioConfig& cfg, const CommandContext& ctx);

// --- doubleslit -------------------------------------------------------------

struct DoubleSlitScenario {
  Grid grid;
  PhysicalConstants constants;
  Potential potential = potentials::Free{};
  SlitSpec slit1;
  SlitSpec slit2;
  double screen_time = 0.0;
  double dt = 0.02;
  double window_min = -1.0;
  double window_max = 1.0;
  std::optional<double> wave_visibility_min;
  std::optional<double> particle_visibility_max;
  bool schmidt = true;
};

DoubleSlitScenario double_slit_scenario(const ScenarioConfig& cfg);

struct DoubleSlitResult {
  Grid grid;
  Eigen::VectorXd density_wave;
  Eigen::VectorXd density_particle;
  std::optional<double> visibility_wave;
  std::optional<double> visibility_particle;
  std::size_t steps = 0;
  double max_norm_drift = 0.0;
  double slit_overlap = 0.0;  // |<phi1, phi2>| at t = 0
  std::optional<std::size_t> rank_wave, rank_particle;
  std::optional<double> entropy_wave, entropy_particle;

  bool thresholds_met(const DoubleSlitScenario& s) const;
};

DoubleSlitResult run_double_slit(const DoubleSlitScenario& s);
int cmd_doubleslit(const ScenarioConfig& cfg, const CommandContext& ctx);

// --- validate ---------------------------------------------------------------

int cmd_validate(const ScenarioConfig& cfg, const CommandContext& ctx);

}  // namespace gapwave
