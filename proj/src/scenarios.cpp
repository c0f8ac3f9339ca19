#include "gapwave/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "gapwave/error.hpp"
#include "gapwave/schmidt.hpp"
#include "gapwave/validate.hpp"

namespace gapwave {

namespace {

using io::json;

constexpr std::string_view kDoubleSlit = R"([grid]
x_min = -110
x_max = 110
n_points = 879

[constants]
hbar = 1
mass = 1

[potential]
kind = free

[slit1]
center = -16
width = 1
momentum = 0
amplitude = 1

[slit2]
center = 16
width = 1
momentum = 0
amplitude = 1

[run]
screen_time = 30.4
dt = 0.02
window_min = -8.5
window_max = 8.5
wave_visibility_min = 0.9
particle_visibility_max = 0.05
schmidt = true
)";

constexpr std::string_view kStationaryPhase = R"([grid]
x_min = -10
x_max = 10
n_points = 400

[constants]
hbar = 1
mass = 1

[potential]
kind = harmonic
omega = 1

[run]
mode = bipartite
initial = eigen
n = 1
m = 0
dt = 0.01
n_steps = 1000
record_every = 10
gap_tol = 1e-6
cross_check = true
cross_check_time = 1.0
cross_check_dt = 0.04
cross_check_levels = 4
)";

constexpr std::string_view kHarmonicGaps = R"([grid]
x_min = -10
x_max = 10
n_points = 32

[constants]
hbar = 1
mass = 1

[potential]
kind = harmonic
omega = 1

[run]
levels = all
direct_cap = 64
match_tol = 1e-8
)";

void say(const CommandContext& ctx, const std::string& line) {
  if (ctx.log) *ctx.log << line << '\n';
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

std::string energies_csv(const EigenSystem& es) {
  std::ostringstream out;
  out << "n,energy\n";
  for (std::size_t k = 0; k < es.size(); ++k) out << k << ',' << io::format_double(es.energies[k]) << '\n';
  return out.str();
}

// Whole number of steps covering `span`; dt must divide it to 1e-9 relative.
std::size_t steps_for(double span, double dt, const char* field) {
  const double ratio = span / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError(field, "time span is not a whole number of steps of " + io::format_double(dt));
  return static_cast<std::size_t>(steps);
}

cd normalized_overlap(const BipartiteWave& ref, const BipartiteWave& psi) {
  return inner_product(ref, psi) / (norm(ref) * norm(psi));
}

cd normalized_overlap(const WaveFunction& ref, const WaveFunction& psi) {
  return inner_product(ref, psi) / (norm(ref) * norm(psi));
}

io::TrajectoryRow make_row(double t, double nrm, cd overlap) {
  return {t, nrm, std::abs(overlap), std::arg(overlap)};
}

Eigen::MatrixXcd load_state_matrix(const ScenarioConfig& cfg, const Grid& g, const std::string& kind) {
  const std::filesystem::path file = cfg.resolve(cfg.get_string("run", "state_file"));
  const std::size_t index = cfg.count_or("run", "snapshot_index", 0);
  io::SnapshotFile f = io::read_snapshots(file);
  if (f.meta.kind != kind)
    throw FormatError("'" + file.string() + "' holds " + f.meta.kind + " states, expected " + kind);
  require_same_grid(g, f.meta.grid, "state_file");
  if (index >= f.snapshots.size())
    throw FormatError("snapshot index " + std::to_string(index) + " out of range in '" + file.string() + "'");
  return std::move(f.snapshots[index]);
}

SlitSpec slit_from(const ScenarioConfig& cfg, const std::string& section) {
  SlitSpec s;
  s.center = cfg.get_double(section, "center");
  s.width = cfg.get_double(section, "width");
  s.transverse_momentum = cfg.double_or(section, "momentum", 0.0);
  s.amplitude = cfg.double_or(section, "amplitude", 1.0);
  if (!(s.width > 0.0)) throw ConfigError(section + ".width", "must be positive");
  return s;
}

SlitSpec checked_slit(const ScenarioConfig& cfg, const std::string& section, const Grid& g) {
  SlitSpec s = slit_from(cfg, section);
  try {
    (void)slit_wave(g, s);
  } catch (const InvalidArgument& e) {
    throw ConfigError(section, e.what());
  }
  return s;
}

}  // namespace

std::string_view builtin_scenario(std::string_view name) {
  if (name == "doubleslit") return kDoubleSlit;
  if (name == "stationary-phase") return kStationaryPhase;
  if (name == "harmonic-gaps") return kHarmonicGaps;
  throw InvalidArgument("unknown built-in scenario '" + std::string(name) + "'");
}

// --- gaps -------------------------------------------------------------------

GapsResult run_gaps(const ScenarioConfig& cfg) {
  const Grid g = cfg.grid();
  const PhysicalConstants c = cfg.constants();
  const Potential u = cfg.potential(g, c);
  const HamiltonianOp h = build_hamiltonian(g, u, c);

  std::optional<std::size_t> levels;
  const std::string levels_text = cfg.string_or("run", "levels", "all");
  if (levels_text != "all") {
    levels = cfg.get_count("run", "levels");
    if (*levels < 1 || *levels > g.n_points)
      throw ConfigError("run.levels", "must be 'all' or a count in [1, n_points]");
  }
  const std::optional<double> cluster_tol = cfg.find_double("run", "cluster_tol");
  if (cluster_tol && !(*cluster_tol >= 0.0)) throw ConfigError("run.cluster_tol", "must be non-negative");

  GapsResult r{g, std::string(potential_name(u)), eigensolve(h, levels), {}, {}, {}, 1e-8, 64};
  r.match_tol = cfg.double_or("run", "match_tol", 1e-8);
  r.direct_cap = cfg.count_or("run", "direct_cap", 64);
  r.pairwise = gap_spectrum_pairwise(r.eigensystem, cluster_tol);

  if (g.n_points <= r.direct_cap) {
    DirectOptions opts;
    opts.max_points = r.direct_cap;
    opts.cluster_tol = cluster_tol;
    r.direct = gap_spectrum_direct(h, opts);
    const GapSpectrum full =
        r.eigensystem.size() == g.n_points ? r.pairwise : gap_spectrum_pairwise(eigensolve(h), cluster_tol);
    r.match = match_spectra(*r.direct, full, r.match_tol);
    attribute_by_value(*r.direct, full, *r.match);
  }
  return r;
}

int cmd_gaps(const ScenarioConfig& cfg, const CommandContext& ctx) {
  const GapsResult r = run_gaps(cfg);
  const auto& dir = ctx.out_dir;

  io::write_text(dir / "energies.csv", energies_csv(r.eigensystem));
  io::write_text(dir / "gaps_pairwise.csv", io::gap_spectrum_csv(r.pairwise));
  io::write_json(dir / "gaps_pairwise.json", io::to_json(r.pairwise));
  if (r.direct) {
    io::write_text(dir / "gaps_direct.csv", io::gap_spectrum_csv(*r.direct));
    io::write_json(dir / "gaps_direct.json", io::to_json(*r.direct));
    io::write_json(dir / "match_report.json", io::to_json(*r.match));
  }

  const auto& e = r.eigensystem.energies;
  json ladder = json::array();
  for (std::size_t k = 1; k < std::min<std::size_t>(6, e.size()); ++k) ladder.push_back(e[k] - e[0]);
  json summary{{"grid", io::to_json(r.grid)},
               {"potential", r.potential},
               {"levels", r.eigensystem.size()},
               {"ground_energy", e.front()},
               {"ladder", ladder},
               {"pairwise_gaps", r.pairwise.gaps.size()},
               {"direct_cap", r.direct_cap},
               {"direct_skipped", !r.direct.has_value()},
               {"match_tol", r.match_tol},
               {"matched", r.match ? json(r.match->matched) : json(nullptr)},
               {"max_abs_deviation", r.match ? json(r.match->max_abs_deviation) : json(nullptr)}};
  io::write_json(dir / "summary.json", summary);

  if (!r.direct) {
    say(ctx, "direct solve skipped: n_points " + std::to_string(r.grid.n_points) + " > direct_cap " +
                 std::to_string(r.direct_cap));
    return kExitOk;
  }
  say(ctx, std::string("match_spectra: ") + (r.match->matched ? "matched" : "FAILED") +
               ", max deviation " + io::format_double(r.match->max_abs_deviation));
  return r.match->matched ? kExitOk : kExitScientificFailure;
}

// --- evolve -----------------------------------------------------------------

double convergence_order(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) throw InvalidArgument("convergence_order needs at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& r : rows) {
    if (!(r.dt > 0.0) || !(r.error > 0.0)) throw InvalidArgument("convergence_order needs positive dt and error");
    const double x = std::log(r.dt), y = std::log(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool EvolveResult::passed() const {
  if (!(max_norm_drift <= 1e-11)) return false;
  if (demapped_gap && eigensolve_gap) {
    const double err = std::abs(*demapped_gap - *eigensolve_gap);
    if (!(err <= std::max(gap_tol * std::abs(*eigensolve_gap), 1e-10))) return false;
  }
  if (convergence_order && !(*convergence_order >= 1.9 && *convergence_order <= 2.1)) return false;
  return true;
}

EvolveResult run_evolve(const ScenarioConfig& cfg, const std::filesystem::path* snapshots) {
  const Grid g = cfg.grid();
  const PhysicalConstants c = cfg.constants();
  const Potential u = cfg.potential(g, c);
  const HamiltonianOp h = build_hamiltonian(g, u, c);

  EvolveResult r;
  r.mode = cfg.string_or("run", "mode", "bipartite");
  if (r.mode != "bipartite" && r.mode != "one_body")
    throw ConfigError("run.mode", "expected 'bipartite' or 'one_body', got '" + r.mode + "'");
  r.initial = cfg.string_or("run", "initial", "eigen");
  if (r.initial != "eigen" && r.initial != "file")
    throw ConfigError("run.initial", "expected 'eigen' or 'file', got '" + r.initial + "'");
  r.propagation.dt = cfg.get_double("run", "dt");
  r.propagation.n_steps = cfg.get_count("run", "n_steps");
  r.propagation.record_every = cfg.count_or("run", "record_every", 1);
  try {
    validate_propagation(r.propagation);
  } catch (const InvalidArgument& e) {
    throw ConfigError("run", e.what());
  }
  r.gap_tol = cfg.double_or("run", "gap_tol", 1e-6);
  const bool cross_check = cfg.bool_or("run", "cross_check", false);
  const bool bipartite = r.mode == "bipartite";

  std::optional<EigenSystem> es;
  if (r.initial == "eigen") {
    r.n = cfg.get_count("run", "n");
    r.m = bipartite ? cfg.get_count("run", "m") : std::size_t{0};
    const std::size_t top = std::max(*r.n, *r.m);
    if (top >= g.n_points) throw ConfigError("run.n", "level index exceeds the grid size");
    es = eigensolve(h, cross_check ? std::nullopt : std::optional<std::size_t>(top + 1));
    if (!bipartite) r.m.reset();
  } else if (cross_check) {
    es = eigensolve(h);
  }

  const double hbar = c.hbar;
  const auto& p = r.propagation;

  if (bipartite) {
    BipartiteWave psi0 = r.initial == "eigen" ? stationary_bipartite(*es, *r.n, *r.m)
                                              : BipartiteWave{g, load_state_matrix(cfg, g, "bipartite")};
    if (r.initial == "eigen") {
      const double en = es->energies[*r.n], em = es->energies[*r.m];
      r.eigensolve_gap = en - em;
      r.cn_gap = cn_mapped_gap(en, em, p.dt, hbar);
      check_phase_cadence(*r.cn_gap, p, hbar);
    }
    r.initial_norm = norm(psi0);

    std::optional<io::SnapshotWriter> writer;
    if (snapshots) writer.emplace(*snapshots, io::SnapshotMeta{g, "bipartite", g.n_points, g.n_points, {}, p.dt,
                                                               p.record_every});
    PhaseSeries series;
    propagate_bipartite_direct(h, psi0, p, [&](std::size_t, double t, const BipartiteWave& psi) {
      const double nrm = norm(psi);
      const cd ov = normalized_overlap(psi0, psi);
      r.rows.push_back(make_row(t, nrm, ov));
      r.max_norm_drift = std::max(r.max_norm_drift, std::abs(nrm - r.initial_norm));
      series.times.push_back(t);
      series.overlaps.push_back(ov);
      if (writer) writer->append(t, psi);
    });
    if (writer) writer->finish();

    if (r.initial == "eigen") {
      r.fitted_gap = extract_gap_from_phase(series, hbar);
      r.demapped_gap = demap_gap(*r.fitted_gap, es->energies[*r.m], p.dt, hbar);
    }
  } else {
    WaveFunction psi0 = r.initial == "eigen" ? es->states[*r.n] : WaveFunction{g, load_state_matrix(cfg, g, "one_body").col(0)};
    r.initial_norm = norm(psi0);

    std::optional<io::SnapshotWriter> writer;
    if (snapshots)
      writer.emplace(*snapshots, io::SnapshotMeta{g, "one_body", g.n_points, 1, {}, p.dt, p.record_every});
    propagate_schrodinger(h, psi0, p, [&](std::size_t, double t, const WaveFunction& psi) {
      const double nrm = norm(psi);
      r.rows.push_back(make_row(t, nrm, normalized_overlap(psi0, psi)));
      r.max_norm_drift = std::max(r.max_norm_drift, std::abs(nrm - r.initial_norm));
      if (writer) writer->append(t, psi);
    });
    if (writer) writer->finish();
  }

  if (cross_check) {
    const double span = cfg.double_or("run", "cross_check_time", 1.0);
    const double dt0 = cfg.double_or("run", "cross_check_dt", p.dt);
    const std::size_t levels = cfg.count_or("run", "cross_check_levels", 4);
    if (!(span > 0.0)) throw ConfigError("run.cross_check_time", "must be positive");
    if (!(dt0 > 0.0)) throw ConfigError("run.cross_check_dt", "must be positive");
    if (levels < 2) throw ConfigError("run.cross_check_levels", "need at least two levels");

    if (bipartite) {
      const BipartiteWave psi0 = r.initial == "eigen" ? stationary_bipartite(*es, *r.n, *r.m)
                                                      : BipartiteWave{g, load_state_matrix(cfg, g, "bipartite")};
      const BipartiteWave exact = propagate_bipartite_factored(*es, psi0, span);
      for (std::size_t l = 0; l < levels; ++l) {
        const double dt = dt0 / std::ldexp(1.0, static_cast<int>(l));
        const std::size_t steps = steps_for(span, dt, "run.cross_check_dt");
        BipartiteCrankNicolson stepper(h, dt);
        BipartiteWave psi = psi0;
        for (std::size_t s = 0; s < steps; ++s) stepper.step(psi);
        r.convergence.push_back({dt, steps, distance(psi, exact)});
      }
    } else {
      const WaveFunction psi0 =
          r.initial == "eigen" ? es->states[*r.n] : WaveFunction{g, load_state_matrix(cfg, g, "one_body").col(0)};
      const WaveFunction exact = propagate_spectral(*es, psi0, span);
      for (std::size_t l = 0; l < levels; ++l) {
        const double dt = dt0 / std::ldexp(1.0, static_cast<int>(l));
        const std::size_t steps = steps_for(span, dt, "run.cross_check_dt");
        CrankNicolson stepper(h, dt);
        WaveFunction psi = psi0;
        for (std::size_t s = 0; s < steps; ++s) stepper.step(psi);
        r.convergence.push_back({dt, steps, norm(WaveFunction{g, psi.values - exact.values})});
      }
    }
    r.convergence_order = convergence_order(r.convergence);
  }
  return r;
}

int cmd_evolve(const ScenarioConfig& cfg, const CommandContext& ctx) {
  const bool write_snapshots = cfg.bool_or("run", "write_snapshots", false);
  const std::filesystem::path snap = ctx.out_dir / "snapshots.bin";
  if (write_snapshots) std::filesystem::create_directories(ctx.out_dir);
  const EvolveResult r = run_evolve(cfg, write_snapshots ? &snap : nullptr);

  io::write_text(ctx.out_dir / "trajectory.csv", io::trajectory_csv(r.rows));

  json summary{{"mode", r.mode},
               {"initial", r.initial},
               {"dt", r.propagation.dt},
               {"n_steps", r.propagation.n_steps},
               {"record_every", r.propagation.record_every},
               {"initial_norm", r.initial_norm},
               {"max_norm_drift", r.max_norm_drift},
               {"n", opt(r.n)},
               {"m", opt(r.m)},
               {"eigensolve_gap", opt(r.eigensolve_gap)},
               {"cn_gap", opt(r.cn_gap)},
               {"fitted_gap", opt(r.fitted_gap)},
               {"demapped_gap", opt(r.demapped_gap)},
               {"gap_tol", r.gap_tol},
               {"convergence_order", opt(r.convergence_order)},
               {"snapshots", write_snapshots ? json("snapshots.bin") : json(nullptr)}};
  if (r.demapped_gap && r.eigensolve_gap)
    summary["gap_relative_error"] = std::abs(*r.demapped_gap - *r.eigensolve_gap) / std::abs(*r.eigensolve_gap);
  const Grid g = cfg.grid();
  const PhysicalConstants c = cfg.constants();
  const Potential pot = cfg.potential(g, c);
  if (const auto* osc = std::get_if<potentials::HarmonicOscillator>(&pot); osc && r.demapped_gap) {
    const double analytic = (static_cast<double>(*r.n) - static_cast<double>(*r.m)) * c.hbar * osc->omega;
    summary["analytic_gap"] = analytic;
    summary["analytic_deviation"] = std::abs(*r.demapped_gap - analytic);
  }
  if (!r.convergence.empty()) {
    std::ostringstream csv;
    csv << "dt,steps,error\n";
    json rows = json::array();
    for (const auto& row : r.convergence) {
      csv << io::format_double(row.dt) << ',' << row.steps << ',' << io::format_double(row.error) << '\n';
      rows.push_back({{"dt", row.dt}, {"steps", row.steps}, {"error", row.error}});
    }
    io::write_text(ctx.out_dir / "convergence.csv", csv.str());
    summary["convergence"] = rows;
  }
  const bool ok = r.passed();
  summary["passed"] = ok;
  io::write_json(ctx.out_dir / "summary.json", summary);

  say(ctx, "norm drift: " + io::format_double(r.max_norm_drift) + " over " +
               std::to_string(r.propagation.n_steps) + " steps");
  if (r.demapped_gap)
    say(ctx, "gap: eigensolve " + io::format_double(*r.eigensolve_gap) + ", extracted " +
                 io::format_double(*r.demapped_gap));
  if (r.convergence_order) say(ctx, "convergence order: " + io::format_double(*r.convergence_order));
  return ok ? kExitOk : kExitScientificFailure;
}

// --- schmidt ----------------------------------------------------------------

BipartiteWave build_configured_state(const ScenarioConfig& cfg, std::uint64_t seed) {
  const Grid g = cfg.grid();
  const std::string state = cfg.get_string("run", "state");
  if (state == "wave" || state == "particle") {
    const SlitSpec s1 = checked_slit(cfg, "slit1", g);
    const SlitSpec s2 = checked_slit(cfg, "slit2", g);
    return build_double_slit(g, s1, s2, state == "wave" ? SlitMode::Wave : SlitMode::Particle);
  }
  if (state == "random") {
    std::mt19937_64 rng(seed);
    return random_bipartite(g, rng);
  }
  if (state == "eigen") {
    const PhysicalConstants c = cfg.constants();
    const HamiltonianOp h = build_hamiltonian(g, cfg.potential(g, c), c);
    const std::size_t n = cfg.get_count("run", "n");
    const std::size_t m = cfg.get_count("run", "m");
    if (std::max(n, m) >= g.n_points) throw ConfigError("run.n", "level index exceeds the grid size");
    return stationary_bipartite(eigensolve(h, std::max(n, m) + 1), n, m);
  }
  if (state == "file") return {g, load_state_matrix(cfg, g, "bipartite")};
  throw ConfigError("run.state", "expected wave, particle, random, eigen or file, got '" + state + "'");
}

int cmd_schmidt(const ScenarioConfig& cfg, const CommandContext& ctx) {
  std::uint64_t seed = ctx.seed.value_or(cfg.has("run", "seed") ? cfg.get_u64("run", "seed") : kDefaultSeed);
  const BipartiteWave psi = build_configured_state(cfg, seed);
  const double rank_tol = cfg.double_or("run", "rank_tol", 1e-12);
  if (!(rank_tol >= 0.0 && rank_tol < 1.0)) throw ConfigError("run.rank_tol", "must lie in [0, 1)");

  const SchmidtDecomposition d = schmidt_decompose(psi, rank_tol);
  const double nrm = norm(psi);
  double sum_sq = 0.0;
  for (double mu : d.coefficients) sum_sq += mu * mu;
  const double parseval = std::abs(sum_sq - nrm * nrm);
  const double recon = distance(reconstruct(d), psi);
  const double entropy = entanglement_entropy(normalized(psi));

  json j = io::write_schmidt(ctx.out_dir, "schmidt", d);
  j["state"] = cfg.get_string("run", "state");
  j["norm"] = nrm;
  j["rank_tol"] = rank_tol;
  j["entropy"] = entropy;
  j["parseval_error"] = parseval;
  j["reconstruction_error"] = recon;
  io::write_json(ctx.out_dir / "schmidt.json", j);

  say(ctx, "rank " + std::to_string(d.rank()) + ", entropy " + io::format_double(entropy));
  say(ctx, "reconstruction error: " + io::format_double(recon));
  return kExitOk;
}

// --- doubleslit -------------------------------------------------------------

DoubleSlitScenario double_slit_scenario(const ScenarioConfig& cfg) {
  DoubleSlitScenario s;
  s.grid = cfg.grid();
  s.constants = cfg.constants();
  if (cfg.has_section("potential")) s.potential = cfg.potential(s.grid, s.constants);
  s.slit1 = checked_slit(cfg, "slit1", s.grid);
  s.slit2 = checked_slit(cfg, "slit2", s.grid);
  s.screen_time = cfg.double_or("run", "screen_time", 0.0);
  s.dt = cfg.double_or("run", "dt", 0.02);
  s.window_min = cfg.double_or("run", "window_min", s.grid.x_min);
  s.window_max = cfg.double_or("run", "window_max", s.grid.x_max);
  s.wave_visibility_min = cfg.find_double("run", "wave_visibility_min");
  s.particle_visibility_max = cfg.find_double("run", "particle_visibility_max");
  s.schmidt = cfg.bool_or("run", "schmidt", true);
  if (!(s.screen_time >= 0.0)) throw ConfigError("run.screen_time", "must be non-negative");
  if (!(s.dt > 0.0)) throw ConfigError("run.dt", "must be positive");
  if (!(s.window_max > s.window_min)) throw ConfigError("run.window_max", "must exceed window_min");
  return s;
}

bool DoubleSlitResult::thresholds_met(const DoubleSlitScenario& s) const {
  if (s.wave_visibility_min && !(visibility_wave && *visibility_wave >= *s.wave_visibility_min)) return false;
  if (s.particle_visibility_max && !(visibility_particle && *visibility_particle <= *s.particle_visibility_max))
    return false;
  return true;
}

DoubleSlitResult run_double_slit(const DoubleSlitScenario& s) {
  DoubleSlitResult r;
  r.grid = s.grid;
  WaveFunction phi1 = slit_wave(s.grid, s.slit1);
  WaveFunction phi2 = slit_wave(s.grid, s.slit2);
  r.slit_overlap = std::abs(inner_product(phi1, phi2));

  if (s.screen_time > 0.0) {
    r.steps = static_cast<std::size_t>(std::ceil(s.screen_time / s.dt - 1e-9));
    const double dt = s.screen_time / static_cast<double>(r.steps);
    const CrankNicolson stepper(build_hamiltonian(s.grid, s.potential, s.constants), dt);
    const double n1 = norm(phi1), n2 = norm(phi2);
    for (std::size_t k = 0; k < r.steps; ++k) {
      stepper.step(phi1);
      stepper.step(phi2);
    }
    r.max_norm_drift = std::max(std::abs(norm(phi1) - n1), std::abs(norm(phi2) - n2));
  }

  r.density_wave = double_slit_density(phi1, phi2, SlitMode::Wave);
  r.density_particle = double_slit_density(phi1, phi2, SlitMode::Particle);
  r.visibility_wave = fringe_visibility(s.grid, {r.density_wave.data(), static_cast<std::size_t>(r.density_wave.size())},
                                        s.window_min, s.window_max);
  r.visibility_particle =
      fringe_visibility(s.grid, {r.density_particle.data(), static_cast<std::size_t>(r.density_particle.size())},
                        s.window_min, s.window_max);

  if (s.schmidt) {
    const BipartiteWave w = double_slit_from_states(phi1, phi2, SlitMode::Wave);
    const BipartiteWave p = double_slit_from_states(phi1, phi2, SlitMode::Particle);
    r.rank_wave = schmidt_rank(w, 1e-10);
    r.rank_particle = schmidt_rank(p, 1e-10);
    r.entropy_wave = entanglement_entropy(w);
    r.entropy_particle = entanglement_entropy(p);
  }
  return r;
}

int cmd_doubleslit(const ScenarioConfig& cfg, const CommandContext& ctx) {
  const DoubleSlitScenario s = double_slit_scenario(cfg);
  const DoubleSlitResult r = run_double_slit(s);
  const auto span = [](const Eigen::VectorXd& v) {
    return std::span<const double>(v.data(), static_cast<std::size_t>(v.size()));
  };
  io::write_text(ctx.out_dir / "density_wave.csv", io::density_csv(r.grid, span(r.density_wave)));
  io::write_text(ctx.out_dir / "density_particle.csv", io::density_csv(r.grid, span(r.density_particle)));

  const bool ok = r.thresholds_met(s);
  json j{{"grid", io::to_json(r.grid)},
         {"screen_time", s.screen_time},
         {"steps", r.steps},
         {"window", {s.window_min, s.window_max}},
         {"slit_overlap", r.slit_overlap},
         {"max_norm_drift", r.max_norm_drift},
         {"visibility_wave", opt(r.visibility_wave)},
         {"visibility_particle", opt(r.visibility_particle)},
         {"wave_visibility_min", opt(s.wave_visibility_min)},
         {"particle_visibility_max", opt(s.particle_visibility_max)},
         {"rank_wave", opt(r.rank_wave)},
         {"rank_particle", opt(r.rank_particle)},
         {"entropy_wave", opt(r.entropy_wave)},
         {"entropy_particle", opt(r.entropy_particle)},
         {"passed", ok}};
  io::write_json(ctx.out_dir / "visibility.json", j);

  const auto show = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string("undefined"); };
  say(ctx, "visibility: wave " + show(r.visibility_wave) + ", particle " + show(r.visibility_particle));
  return ok ? kExitOk : kExitScientificFailure;
}

// --- validate ---------------------------------------------------------------

int cmd_validate(const ScenarioConfig& cfg, const CommandContext& ctx) {
  validate::Options opts;
  if (cfg.has("validate", "sizes")) opts.sizes = cfg.count_list("validate", "sizes");
  opts.match_tol = cfg.double_or("validate", "match_tol", opts.match_tol);
  opts.seed = ctx.seed.value_or(cfg.has("validate", "seed") ? cfg.get_u64("validate", "seed") : kDefaultSeed);
  opts.analytic = cfg.bool_or("validate", "analytic", true);
  opts.phase = cfg.bool_or("validate", "phase", true);
  opts.double_slit = cfg.bool_or("validate", "double_slit", true);
  for (std::size_t n : opts.sizes)
    if (n < 2) throw ConfigError("validate.sizes", "every size must be at least 2");
  opts.on_result = [&](const validate::CheckResult& c) {
    if (!c.passed) say(ctx, "FAIL " + c.name + ": " + c.detail);
  };

  const auto results = validate::run_all(opts);
  std::size_t failed = 0;
  json checks = json::array();
  for (const auto& c : results) {
    failed += c.passed ? 0 : 1;
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  json report{{"passed", failed == 0},
              {"checks_run", results.size()},
              {"checks_failed", failed},
              {"seed", opts.seed},
              {"sizes", opts.sizes},
              {"match_tol", opts.match_tol},
              {"checks", checks}};
  io::write_json(ctx.out_dir / "validate_report.json", report);
  say(ctx, std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) + " checks passed");
  return failed == 0 ? kExitOk : kExitScientificFailure;
}

}  // namespace gapwave
