#include "gapwave/dynamics.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "gapwave/error.hpp"

namespace gapwave {

void validate_propagation(const PropagationConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidArgument("propagation: dt must be positive");
  if (cfg.n_steps < 1) throw InvalidArgument("propagation: n_steps must be at least 1");
  if (cfg.record_every < 1) throw InvalidArgument("propagation: record_every must be at least 1");
}

namespace {

kernels::Tridiag shifted(const HamiltonianOp& h, cd scale) {
  kernels::Tridiag t;
  t.diag.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) t.diag[i] = 1.0 + scale * h.diagonal[static_cast<Eigen::Index>(i)];
  t.off = scale * h.off_diagonal;
  return t;
}

}  // namespace

CrankNicolson::CrankNicolson(const HamiltonianOp& h, double dt) : grid_(h.grid), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("CrankNicolson: dt must be positive");
  const cd itau(0.0, dt / (2.0 * h.constants.hbar));
  explicit_ = shifted(h, -itau);
  implicit_ = kernels::factorize(shifted(h, itau));
  explicit_conj_ = shifted(h, itau);
  implicit_conj_ = kernels::factorize(shifted(h, -itau));
  scratch_.resize(h.size());
}

void CrankNicolson::step(WaveFunction& psi) const {
  require_same_grid(grid_, psi.grid, "CrankNicolson::step");
  std::span<cd> x(psi.values.data(), static_cast<std::size_t>(psi.values.size()));
  kernels::apply(explicit_, x, scratch_);
  kernels::solve_inplace(implicit_, scratch_);
  std::copy(scratch_.begin(), scratch_.end(), x.begin());
}

void CrankNicolson::step_columns(std::span<cd> data, std::size_t rows, std::size_t cols) const {
  std::vector<cd> tmp(data.size());
  kernels::omp::apply_columns(explicit_, data, tmp, rows, cols);
  kernels::omp::solve_columns(implicit_, tmp, rows, cols);
  std::copy(tmp.begin(), tmp.end(), data.begin());
}

void CrankNicolson::step_rows_conjugate(std::span<cd> data, std::size_t rows, std::size_t cols) const {
  std::vector<cd> tmp(data.size());
  kernels::omp::apply_rows(explicit_conj_, data, tmp, rows, cols);
  kernels::omp::solve_rows(implicit_conj_, tmp, rows, cols);
  std::copy(tmp.begin(), tmp.end(), data.begin());
}

BipartiteCrankNicolson::BipartiteCrankNicolson(const HamiltonianOp& h, double dt) : one_body_(h, dt) {}

void BipartiteCrankNicolson::step(BipartiteWave& psi) {
  require_same_grid(one_body_.grid(), psi.grid, "BipartiteCrankNicolson::step");
  const std::size_t n = psi.grid.n_points;
  std::span<cd> data(psi.amplitudes.data(), n * n);
  one_body_.step_columns(data, n, n);
  one_body_.step_rows_conjugate(data, n, n);
}

namespace {

void warn_if_unnormalized(double nrm, const char* where) {
  if (std::abs(nrm - 1.0) > 1e-8)
    std::clog << "warning: " << where << ": initial state has norm " << nrm << ", not 1\n";
}

}  // namespace

void propagate_schrodinger(const HamiltonianOp& h, const WaveFunction& psi0, const PropagationConfig& cfg,
                           const OneBodyObserver& observe) {
  validate_propagation(cfg);
  require_same_grid(h.grid, psi0.grid, "propagate_schrodinger");
  warn_if_unnormalized(norm(psi0), "propagate_schrodinger");
  CrankNicolson cn(h, cfg.dt);
  WaveFunction psi = psi0;
  observe(0, 0.0, psi);
  for (std::size_t s = 1; s <= cfg.n_steps; ++s) {
    cn.step(psi);
    if (s % cfg.record_every == 0 || s == cfg.n_steps) observe(s, static_cast<double>(s) * cfg.dt, psi);
  }
}

Trajectory<WaveFunction> propagate_schrodinger(const HamiltonianOp& h, const WaveFunction& psi0,
                                               const PropagationConfig& cfg) {
  Trajectory<WaveFunction> traj;
  propagate_schrodinger(h, psi0, cfg, [&](std::size_t, double t, const WaveFunction& psi) {
    traj.times.push_back(t);
    traj.states.push_back(psi);
    traj.norms.push_back(norm(psi));
  });
  return traj;
}

void propagate_bipartite_direct(const HamiltonianOp& h, const BipartiteWave& psi0, const PropagationConfig& cfg,
                                const BipartiteObserver& observe) {
  validate_propagation(cfg);
  require_same_grid(h.grid, psi0.grid, "propagate_bipartite_direct");
  BipartiteCrankNicolson cn(h, cfg.dt);
  BipartiteWave psi = psi0;
  observe(0, 0.0, psi);
  for (std::size_t s = 1; s <= cfg.n_steps; ++s) {
    cn.step(psi);
    if (s % cfg.record_every == 0 || s == cfg.n_steps) observe(s, static_cast<double>(s) * cfg.dt, psi);
  }
}

Trajectory<BipartiteWave> propagate_bipartite_direct(const HamiltonianOp& h, const BipartiteWave& psi0,
                                                     const PropagationConfig& cfg) {
  Trajectory<BipartiteWave> traj;
  propagate_bipartite_direct(h, psi0, cfg, [&](std::size_t, double t, const BipartiteWave& psi) {
    traj.times.push_back(t);
    traj.states.push_back(psi);
    traj.norms.push_back(norm(psi));
  });
  return traj;
}

BipartiteWave propagate_bipartite_factored(const EigenSystem& es, const BipartiteWave& psi0, double t) {
  require_same_grid(es.grid, psi0.grid, "propagate_bipartite_factored");
  if (es.size() != es.grid.n_points)
    throw InvalidArgument("propagate_bipartite_factored: needs the full spectrum");
  Eigen::MatrixXcd c = expand_bipartite(es, psi0);
  const double hbar = es.constants.hbar;
  for (Eigen::Index m = 0; m < c.cols(); ++m)
    for (Eigen::Index n = 0; n < c.rows(); ++n) {
      const double gap = es.energies[static_cast<std::size_t>(n)] - es.energies[static_cast<std::size_t>(m)];
      c(n, m) *= std::polar(1.0, -gap * t / hbar);
    }
  return resum_bipartite(es, c);
}

BipartiteWave propagate_bipartite_factored(const HamiltonianOp& h, const BipartiteWave& psi0, double t) {
  return propagate_bipartite_factored(eigensolve(h), psi0, t);
}

WaveFunction propagate_spectral(const EigenSystem& es, const WaveFunction& psi0, double t) {
  require_same_grid(es.grid, psi0.grid, "propagate_spectral");
  WaveFunction out = WaveFunction::zeros(es.grid);
  for (std::size_t n = 0; n < es.size(); ++n) {
    const cd c = inner_product(es.states[n], psi0) * std::polar(1.0, -es.energies[n] * t / es.constants.hbar);
    out.values += c * es.states[n].values;
  }
  return out;
}

double cn_phase_rate(double energy, double dt, double hbar) {
  return (2.0 * hbar / dt) * std::atan(energy * dt / (2.0 * hbar));
}

double cn_mapped_gap(double e_n, double e_m, double dt, double hbar) {
  return cn_phase_rate(e_n, dt, hbar) - cn_phase_rate(e_m, dt, hbar);
}

double demap_gap(double fitted_gap, double e_m, double dt, double hbar) {
  const double upper_rate = fitted_gap + cn_phase_rate(e_m, dt, hbar);
  const double arg = upper_rate * dt / (2.0 * hbar);
  if (std::abs(arg) >= std::numbers::pi / 2)
    throw InvalidArgument("demap_gap: fitted rate lies outside the Cayley map's range");
  return (2.0 * hbar / dt) * std::tan(arg) - e_m;
}

void check_phase_cadence(double gap, const PropagationConfig& cfg, double hbar) {
  const double per_sample = std::abs(gap) * static_cast<double>(cfg.record_every) * cfg.dt / hbar;
  if (!(per_sample < std::numbers::pi))
    throw InvalidArgument("phase cadence: gap " + std::to_string(gap) + " advances " +
                          std::to_string(per_sample) + " rad between snapshots (must stay below pi); "
                          "lower record_every or dt");
}

PhaseSeries overlap_series(const Trajectory<BipartiteWave>& traj, const BipartiteWave& reference) {
  PhaseSeries s;
  const double rn = norm(reference);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    s.times.push_back(traj.times[k]);
    s.overlaps.push_back(inner_product(reference, traj.states[k]) / (rn * norm(traj.states[k])));
  }
  return s;
}

double extract_gap_from_phase(const PhaseSeries& series, double hbar) {
  const std::size_t n = series.times.size();
  if (n < 3 || series.overlaps.size() != n)
    throw InvalidArgument("extract_gap_from_phase: need at least 3 snapshots");
  std::vector<double> phase(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double mod = std::abs(series.overlaps[k]);
    if (mod < 0.99)
      throw InvalidArgument("extract_gap_from_phase: trajectory is not stationary (overlap " +
                            std::to_string(mod) + " at t = " + std::to_string(series.times[k]) + ")");
    phase[k] = std::arg(series.overlaps[k]);
    if (k > 0) {
      // nearest branch to the previous unwrapped value
      const double two_pi = 2.0 * std::numbers::pi;
      phase[k] -= two_pi * std::round((phase[k] - phase[k - 1]) / two_pi);
    }
  }
  double tm = 0.0, pm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    tm += series.times[k];
    pm += phase[k];
  }
  tm /= static_cast<double>(n);
  pm /= static_cast<double>(n);
  double stt = 0.0, stp = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    stt += (series.times[k] - tm) * (series.times[k] - tm);
    stp += (series.times[k] - tm) * (phase[k] - pm);
  }
  if (!(stt > 0.0)) throw InvalidArgument("extract_gap_from_phase: snapshot times are not distinct");
  return -hbar * stp / stt;
}

double extract_gap_from_phase(const Trajectory<BipartiteWave>& traj, const BipartiteWave& reference,
                              double hbar) {
  return extract_gap_from_phase(overlap_series(traj, reference), hbar);
}

}  // namespace gapwave
