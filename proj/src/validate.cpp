#include "gapwave/validate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "gapwave/dynamics.hpp"
#include "gapwave/error.hpp"
#include "gapwave/observables.hpp"
#include "gapwave/scenarios.hpp"
#include "gapwave/schmidt.hpp"
#include "gapwave/spectrum.hpp"

namespace gapwave::validate {

namespace {

struct Measure {
  Measure(double v, bool ok, std::string d = {}, std::optional<double> tol = {})
      : value(v), passed(ok), detail(std::move(d)), tolerance(tol) {}

  double value;
  bool passed;
  std::string detail;
  std::optional<double> tolerance;  // replaces the nominal one when data-dependent
};

Measure at_most(double value, double tol) {
  return {value, std::isfinite(value) && value <= tol, {}};
}

class Runner {
 public:
  explicit Runner(const Options& o) : opts_(o) {}

  // `fn` returns a Measure; exceptions become failed checks.
  template <class F>
  void check(const std::string& name, double tol, F&& fn) {
    CheckResult r{name, false, 0.0, tol, {}};
    try {
      Measure m = fn();
      r.value = m.value;
      r.passed = m.passed;
      if (m.tolerance) r.tolerance = *m.tolerance;
      r.detail = m.detail.empty() ? (m.passed ? "ok" : "value exceeds tolerance") : m.detail;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    if (opts_.on_result) opts_.on_result(r);
    results_.push_back(std::move(r));
  }

  const Options& opts() const { return opts_; }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  const Options& opts_;
  std::vector<CheckResult> results_;
};

std::string tag(const std::string& potential, std::size_t n) {
  return "[" + potential + ",N=" + std::to_string(n) + "]";
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Pointwise relative error over sites where the reference exceeds floor.
double relative_error(const Eigen::VectorXd& got, const Eigen::VectorXd& ref, double floor = 1e-12) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ref.size(); ++i)
    if (ref[i] > floor) worst = std::max(worst, std::abs(got[i] - ref[i]) / ref[i]);
  return worst;
}

Eigen::VectorXd unit_density(const Grid& g, Eigen::VectorXd d) { return d / (g.dx * d.sum()); }

WaveFunction evolve_one_body(const HamiltonianOp& h, WaveFunction psi, double dt, std::size_t steps) {
  const CrankNicolson cn(h, dt);
  for (std::size_t s = 0; s < steps; ++s) cn.step(psi);
  return psi;
}

BipartiteWave evolve_bipartite(const HamiltonianOp& h, BipartiteWave psi, double dt, std::size_t steps) {
  BipartiteCrankNicolson cn(h, dt);
  for (std::size_t s = 0; s < steps; ++s) cn.step(psi);
  return psi;
}

// Low-lying superposition, entangled, so CN sits in its asymptotic regime.
BipartiteWave smooth_entangled(const EigenSystem& es) {
  const auto& s = es.states;
  WaveFunction a{es.grid, s[0].values + s[1].values};
  WaveFunction b{es.grid, s[0].values + cd(0.0, 1.0) * s[2].values};
  BipartiteWave psi = BipartiteWave::outer(a, b);
  psi.amplitudes += 0.5 * BipartiteWave::outer(s[1], s[3]).amplitudes;
  return normalized(psi);
}

BipartiteWave random_rank(const Grid& g, std::size_t rank, std::mt19937_64& rng) {
  BipartiteWave psi = BipartiteWave::zeros(g);
  for (std::size_t k = 0; k < rank; ++k)
    psi.amplitudes += static_cast<double>(k + 1) *
                      BipartiteWave::outer(random_wave(g, rng), random_wave(g, rng)).amplitudes;
  return normalized(psi);
}

Eigen::MatrixXcd random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = cd(nd(rng), nd(rng));
  return 0.5 * (a + a.adjoint());
}

// ---------------------------------------------------------------------------

void grid_checks(Runner& run, std::mt19937_64& rng) {
  const Grid g = make_grid(-5.0, 5.0, 64);
  const WaveFunction f = random_wave(g, rng), h = random_wave(g, rng), k = random_wave(g, rng);
  run.check("grid.inner_product_conjugate_symmetry", 1e-14, [&] {
    return at_most(std::abs(inner_product(f, h) - std::conj(inner_product(h, f))), 1e-14);
  });
  run.check("grid.inner_product_linearity", 1e-13, [&] {
    const cd a(0.3, -1.2), b(-0.7, 0.4);
    const WaveFunction mix{g, a * h.values + b * k.values};
    return at_most(std::abs(inner_product(f, mix) - (a * inner_product(f, h) + b * inner_product(f, k))), 1e-13);
  });
  run.check("grid.norm_positive", 0.0, [&] {
    return Measure{norm(f), norm(f) > 0.0 && norm(WaveFunction::zeros(g)) == 0.0, {}};
  });
}

void hamiltonian_checks(Runner& run, const std::vector<NamedHamiltonian>& ops) {
  for (const auto& [name, h] : ops) {
    const std::string t = tag(name, h.grid.n_points);
    const double bound = h.spectral_bound();
    const Eigen::MatrixXd d = h.dense();
    run.check("hamiltonian.symmetric" + t, 0.0, [&] { return at_most((d - d.transpose()).cwiseAbs().maxCoeff(), 0.0); });
    run.check("hamiltonian.positive_semidefinite" + t, 1e-12 * bound, [&] {
      const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(d, Eigen::EigenvaluesOnly).eigenvalues()[0];
      return Measure{lo, lo >= -1e-12 * bound, {}};
    });
    if (name == "box") {
      run.check("hamiltonian.box_stencil" + t, 1e-12 * bound, [&] {
        const double kinetic = 1.0 / (h.grid.dx * h.grid.dx);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < d.rows(); ++i)
          for (Eigen::Index j = 0; j < d.cols(); ++j) {
            const double want = i == j ? kinetic : (std::abs(i - j) == 1 ? -0.5 * kinetic : 0.0);
            worst = std::max(worst, std::abs(d(i, j) - want));
          }
        return at_most(worst, 1e-12 * bound);
      });
    }
  }
}

void spectrum_checks(Runner& run, std::mt19937_64& rng) {
  const Options& o = run.opts();
  for (std::size_t n : o.sizes) {
    for (const auto& [name, h] : builtin_hamiltonians(n)) {
      const std::string t = tag(name, n);
      const double bound = h.spectral_bound();
      const EigenSystem es = eigensolve(h);

      run.check("spectrum.eigensystem_orthonormal" + t, 1e-10, [&] {
        const Eigen::MatrixXcd b = es.basis();
        const Eigen::MatrixXcd gram = h.grid.dx * b.adjoint() * b;
        return at_most(max_abs(gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())), 1e-10);
      });
      run.check("spectrum.eigensystem_residual" + t, 1e-10 * bound, [&] {
        double worst = 0.0;
        for (std::size_t k = 0; k < es.size(); ++k) {
          const WaveFunction hv = apply_hamiltonian(h, es.states[k]);
          worst = std::max(worst, norm(WaveFunction{h.grid, hv.values - es.energies[k] * es.states[k].values}));
        }
        return at_most(worst, 1e-10 * bound);
      });

      if (n > 64) continue;
      std::optional<GapSpectrum> direct;
      const GapSpectrum pairwise = gap_spectrum_pairwise(es);
      run.check("spectrum.match_spectra" + t, o.match_tol, [&] {
        direct = gap_spectrum_direct(h);
        const MatchReport r = match_spectra(*direct, pairwise, o.match_tol);
        Measure m{r.max_abs_deviation, r.matched, {}};
        if (!r.matched)
          m.detail = std::to_string(r.residuals_a.size()) + " direct and " + std::to_string(r.residuals_b.size()) +
                     " pairwise gaps unmatched";
        return m;
      });
      if (!direct) continue;
      const auto& gaps = direct->gaps;
      run.check("spectrum.gap_antisymmetry" + t, 1e-10 * bound, [&] {
        double worst = 0.0;
        for (std::size_t k = 0; k < gaps.size(); ++k) worst = std::max(worst, std::abs(gaps[k] + gaps[gaps.size() - 1 - k]));
        return at_most(worst, 1e-10 * bound);
      });
      run.check("spectrum.gap_trace_zero" + t, 1e-12 * bound * static_cast<double>(gaps.size()), [&] {
        double sum = 0.0;
        for (double v : gaps) sum += v;
        return at_most(std::abs(sum), 1e-12 * bound * static_cast<double>(gaps.size()));
      });
      run.check("spectrum.zero_gap_multiplicity" + t, static_cast<double>(n), [&] {
        const auto zeros = std::count_if(gaps.begin(), gaps.end(), [&](double v) { return std::abs(v) <= 1e-9 * bound; });
        return Measure{static_cast<double>(zeros), static_cast<std::size_t>(zeros) >= n,
                       std::to_string(zeros) + " zero gaps"};
      });
      if (n <= 8) {
        run.check("spectrum.stationary_eigenvector" + t, 1e-9 * bound, [&] {
          double worst = 0.0;
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
              const BipartiteWave psi = stationary_bipartite(es, a, b);
              BipartiteWave k = gap_operator_apply(h, psi);
              k.amplitudes -= (es.energies[a] - es.energies[b]) * psi.amplitudes;
              worst = std::max(worst, norm(k));
            }
          return at_most(worst, 1e-9 * bound);
        });
      }
      if (n == 16 || n == o.sizes.front()) {
        run.check("spectrum.stationary_completeness" + t, 1e-10, [&] {
          const BipartiteWave psi = random_bipartite(h.grid, rng);
          return at_most(distance(resum_bipartite(es, expand_bipartite(es, psi)), psi), 1e-10);
        });
      }
    }
  }
}

void analytic_checks(Runner& run) {
  run.check("spectrum.analytic_box[N=400]", 0.01, [&] {
    const Grid g = make_grid(0.0, 1.0, 400);
    const EigenSystem es = eigensolve(build_hamiltonian(g, potentials::Box{}), 5);
    const double length = g.x_max - g.x_min;
    double worst = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
      const double n = static_cast<double>(k + 1);
      const double exact = n * n * std::numbers::pi * std::numbers::pi / (2.0 * length * length);
      worst = std::max(worst, std::abs(es.energies[k] - exact) / exact);
    }
    return at_most(worst, 0.01);
  });
  const Grid g = make_grid(-10.0, 10.0, 400);
  const EigenSystem osc = eigensolve(build_hamiltonian(g, potentials::HarmonicOscillator{1.0}), 3);
  run.check("spectrum.analytic_harmonic_gap1[N=400]", 1e-3,
            [&] { return at_most(std::abs(osc.energies[1] - osc.energies[0] - 1.0), 1e-3); });
  run.check("spectrum.analytic_harmonic_gap2[N=400]", 3e-3,
            [&] { return at_most(std::abs(osc.energies[2] - osc.energies[0] - 2.0), 3e-3); });
}

void dynamics_checks(Runner& run, std::mt19937_64& rng) {
  const Grid g = make_grid(-10.0, 10.0, 32);
  const HamiltonianOp h = build_hamiltonian(g, potentials::HarmonicOscillator{1.0});
  const EigenSystem es = eigensolve(h);
  const double dt = 0.01;

  const BipartiteWave start = random_rank(g, 3, rng);
  std::vector<double> drift, sv_drift, entropy_drift;
  const std::vector<double> sv0 = schmidt_coefficients(start);
  const double s0 = entanglement_entropy(start);
  std::size_t rank_seen = 0;
  bool rank_stable = true;
  BipartiteWave last = start;
  PropagationConfig cfg{dt, 1000, 100};
  run.check("dynamics.norm_conservation[1000 steps]", 1e-11, [&] {
    double worst = 0.0, worst_sv = 0.0, worst_s = 0.0;
    propagate_bipartite_direct(h, start, cfg, [&](std::size_t, double, const BipartiteWave& psi) {
      worst = std::max(worst, std::abs(norm(psi) - norm(start)));
      const auto sv = schmidt_coefficients(psi);
      for (std::size_t k = 0; k < sv.size(); ++k) worst_sv = std::max(worst_sv, std::abs(sv[k] - sv0[k]));
      worst_s = std::max(worst_s, std::abs(entanglement_entropy(psi) - s0));
      rank_seen = schmidt_rank(psi, 1e-10);
      rank_stable = rank_stable && rank_seen == 3;
      last = psi;
    });
    sv_drift.push_back(worst_sv);
    entropy_drift.push_back(worst_s);
    return at_most(worst, 1e-11);
  });
  run.check("dynamics.schmidt_coefficients_conserved", 1e-9,
            [&] { return at_most(sv_drift.empty() ? NAN : sv_drift.front(), 1e-9); });
  run.check("schmidt.entropy_conserved", 1e-9,
            [&] { return at_most(entropy_drift.empty() ? NAN : entropy_drift.front(), 1e-9); });
  run.check("schmidt.rank_invariant", 0.0, [&] {
    return Measure{static_cast<double>(rank_seen), rank_stable, "rank " + std::to_string(rank_seen)};
  });
  run.check("schmidt.termwise_evolution", 1e-9, [&] {
    const SchmidtDecomposition d = schmidt_decompose(start);
    SchmidtDecomposition moved = d;
    for (std::size_t k = 0; k < d.rank(); ++k) {
      moved.left_states[k] = evolve_one_body(h, d.left_states[k], dt, 1000);
      moved.right_states[k] = evolve_one_body(h, d.right_states[k], dt, 1000);
    }
    return at_most(distance(reconstruct(moved), last), 1e-9);
  });

  const WaveFunction psi = random_wave(g, rng), phi = random_wave(g, rng);
  const WaveFunction psi_t = evolve_one_body(h, psi, dt, 200);
  run.check("dynamics.product_form", 1e-9, [&] {
    const WaveFunction phi_t = evolve_one_body(h, phi, dt, 200);
    const BipartiteWave direct = evolve_bipartite(h, BipartiteWave::outer(psi, phi), dt, 200);
    return at_most(distance(direct, BipartiteWave::outer(psi_t, phi_t)), 1e-9);
  });
  run.check("dynamics.density_operator_form", 1e-9, [&] {
    const BipartiteWave direct = evolve_bipartite(h, BipartiteWave::outer(psi, psi), dt, 200);
    return at_most(distance(direct, BipartiteWave::outer(psi_t, psi_t)), 1e-9);
  });
  run.check("dynamics.factored_unitary", 1e-10, [&] {
    const BipartiteWave moved = propagate_bipartite_factored(es, start, 2.5);
    return at_most(std::abs(norm(moved) - norm(start)), 1e-10);
  });
  run.check("dynamics.convergence_order", 0.1, [&] {
    const BipartiteWave psi0 = smooth_entangled(es);
    const double span = 1.0;
    const BipartiteWave exact = propagate_bipartite_factored(es, psi0, span);
    std::vector<ConvergenceRow> rows;
    for (int l = 0; l < 4; ++l) {
      const double step = 0.04 / std::ldexp(1.0, l);
      const auto steps = static_cast<std::size_t>(std::lround(span / step));
      rows.push_back({step, steps, distance(evolve_bipartite(h, psi0, step, steps), exact)});
    }
    const double order = convergence_order(rows);
    return Measure{order, order >= 1.9 && order <= 2.1, "fitted order " + std::to_string(order)};
  });
  run.check("dynamics.cn_dispersion_roundtrip", 1e-12, [&] {
    const double en = 2.5, em = 0.5, step = 0.05;
    return at_most(std::abs(demap_gap(cn_mapped_gap(en, em, step, 1.0), em, step, 1.0) - (en - em)), 1e-12);
  });
}

void schmidt_checks(Runner& run, std::mt19937_64& rng) {
  for (std::size_t n : run.opts().sizes) {
    const Grid g = make_grid(-5.0, 5.0, n);
    const BipartiteWave psi = random_bipartite(g, rng);
    const SchmidtDecomposition d = schmidt_decompose(psi, 0.0);
    const std::string t = "[N=" + std::to_string(n) + "]";
    run.check("schmidt.parseval" + t, 1e-10, [&] {
      double s = 0.0;
      for (double mu : d.coefficients) s += mu * mu;
      return at_most(std::abs(s - norm(psi) * norm(psi)), 1e-10);
    });
    run.check("schmidt.reconstruction" + t, 1e-10, [&] { return at_most(distance(reconstruct(d), psi), 1e-10); });
    run.check("schmidt.orthonormal_factors" + t, 1e-10, [&] {
      double worst = 0.0;
      for (std::size_t a = 0; a < d.rank(); ++a)
        for (std::size_t b = 0; b < d.rank(); ++b) {
          const double want = a == b ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(inner_product(d.left_states[a], d.left_states[b]) - want));
          worst = std::max(worst, std::abs(inner_product(d.right_states[a], d.right_states[b]) - want));
        }
      return at_most(worst, 1e-10);
    });
  }
  const Grid g = make_grid(-5.0, 5.0, 32);
  run.check("schmidt.product_state_rank", 0.0, [&] {
    const std::size_t r = schmidt_rank(BipartiteWave::outer(random_wave(g, rng), random_wave(g, rng)));
    return Measure{static_cast<double>(r), r == 1, "rank " + std::to_string(r)};
  });
}

void observable_checks(Runner& run, std::mt19937_64& rng) {
  const Grid g = make_grid(-10.0, 10.0, 64);
  const HamiltonianOp h = build_hamiltonian(g, potentials::HarmonicOscillator{1.0});
  std::uniform_real_distribution<double> ud(0.0, 3.0);
  std::vector<double> table(g.n_points);
  for (double& v : table) v = ud(rng);
  const std::vector<std::pair<std::string, LinearObservable>> obs{
      {"position", observables::Position{}},
      {"momentum", observables::Momentum{1.0}},
      {"energy", observables::Energy{h}},
      {"tabulated", observables::DiagonalTabulated{table}},
      {"dense", dense_observable(random_hermitian(g.n_points, rng))}};

  std::vector<std::pair<WaveFunction, WaveFunction>> states;
  for (int k = 0; k < 20; ++k) states.emplace_back(random_wave(g, rng), random_wave(g, rng));
  for (const auto& [name, o] : obs) {
    run.check("observables.product_reduction[" + name + "]", 1e-10, [&] {
      double worst = 0.0;
      for (const auto& [psi, phi] : states) {
        const double want = one_body_expectation(psi, o);
        const double got = expectation(BipartiteWave::outer(psi, phi), o);
        worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
      }
      return at_most(worst, 1e-10);
    });
  }
  run.check("observables.non_hermitian_rejected", 0.0, [&] {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 1) = 1.0;
    try {
      (void)dense_observable(m);
    } catch (const InvalidArgument&) {
      return Measure{0.0, true, {}};
    }
    return Measure{1.0, false, "accepted a non-Hermitian matrix"};
  });

  const BipartiteWave mixed = random_rank(g, 3, rng);
  run.check("observables.density_sum", 1e-12, [&] {
    return at_most(std::abs(g.dx * position_density(mixed).sum() - 1.0), 1e-12);
  });
  run.check("observables.rho_intertwines_evolution", 1e-9, [&] {
    const EigenSystem es = eigensolve(h);
    const double t = 1.7;
    const Eigen::MatrixXcd b = es.basis();
    Eigen::VectorXcd phase(static_cast<Eigen::Index>(es.size()));
    for (std::size_t k = 0; k < es.size(); ++k) phase[static_cast<Eigen::Index>(k)] = std::polar(1.0, -es.energies[k] * t);
    const Eigen::MatrixXcd u = g.dx * b * phase.asDiagonal() * b.adjoint();
    const Eigen::MatrixXcd want = u * rho_of(mixed).matrix * u.adjoint();
    const Eigen::MatrixXcd got = rho_of(propagate_bipartite_factored(es, mixed, t)).matrix;
    return at_most((got - want).norm(), 1e-9);
  });
  run.check("observables.rho_intertwines_cn", 1e-9, [&] {
    const double dt = 0.01;
    const BipartiteWave moved = evolve_bipartite(h, mixed, dt, 300);
    // One-body propagator assembled column by column.
    Eigen::MatrixXcd u(static_cast<Eigen::Index>(g.n_points), static_cast<Eigen::Index>(g.n_points));
    for (std::size_t k = 0; k < g.n_points; ++k) {
      WaveFunction e = WaveFunction::zeros(g);
      e.values[static_cast<Eigen::Index>(k)] = 1.0;
      u.col(static_cast<Eigen::Index>(k)) = evolve_one_body(h, e, dt, 300).values;
    }
    const Eigen::MatrixXcd want = u * rho_of(mixed).matrix * u.adjoint();
    return at_most((rho_of(moved).matrix - want).norm(), 1e-9);
  });

  // Slits far apart on a fine grid.
  const Grid sg = make_grid(-20.0, 20.0, 400);
  const SlitSpec left{-5.0, 0.5, 0.0, 1.0}, right{5.0, 0.5, 0.0, 1.0};
  const WaveFunction p1 = slit_wave(sg, left), p2 = slit_wave(sg, right);
  run.check("observables.wave_density_static", 1e-9, [&] {
    const Eigen::VectorXd want = unit_density(sg, (p1.values + p2.values).cwiseAbs2());
    return at_most(relative_error(position_density(build_double_slit(sg, left, right, SlitMode::Wave)), want), 1e-9);
  });
  run.check("observables.particle_density_static", 1e-9, [&] {
    const Eigen::VectorXd want = unit_density(sg, p1.values.cwiseAbs2() + p2.values.cwiseAbs2());
    return at_most(relative_error(position_density(build_double_slit(sg, left, right, SlitMode::Particle)), want),
                   1e-9);
  });
  run.check("observables.density_shortcut", 1e-9, [&] {
    const SlitSpec near{1.0, 1.5, 0.7, 1.0};
    const WaveFunction q = slit_wave(sg, near);
    double worst = 0.0;
    for (SlitMode mode : {SlitMode::Wave, SlitMode::Particle})
      worst = std::max(worst, relative_error(double_slit_density(p1, q, mode),
                                             position_density(double_slit_from_states(p1, q, mode))));
    return at_most(worst, 1e-9);
  });
  run.check("observables.particle_entropy_ln2", 1e-6, [&] {
    const double s = entanglement_entropy(build_double_slit(sg, left, right, SlitMode::Particle));
    return at_most(std::abs(s - std::numbers::ln2), 1e-6);
  });
  run.check("observables.particle_purity_half", 1e-9, [&] {
    return at_most(std::abs(purity(build_double_slit(sg, left, right, SlitMode::Particle)) - 0.5), 1e-9);
  });
  run.check("observables.wave_rank_one", 0.0, [&] {
    const std::size_t r = schmidt_rank(build_double_slit(sg, left, right, SlitMode::Wave), 1e-10);
    return Measure{static_cast<double>(r), r == 1, "rank " + std::to_string(r)};
  });
  run.check("observables.mixture_overlap_bound", 0.0, [&] {
    const SlitSpec a{-1.0, 1.0, 0.0, 1.0}, b{1.0, 1.0, 0.0, 1.0};
    const WaveFunction q1 = slit_wave(sg, a), q2 = slit_wave(sg, b);
    const Eigen::VectorXd mix = 0.5 * (q1.values.cwiseAbs2() + q2.values.cwiseAbs2());
    const Eigen::VectorXd got = position_density(double_slit_from_states(q1, q2, SlitMode::Particle));
    const double dev = sg.dx * (got - mix).cwiseAbs().sum();
    const double bound = 2.0 * std::abs(inner_product(q1, q2));
    return Measure{dev, dev <= bound, "L1 deviation against the even mixture", bound};
  });
  run.check("observables.coincident_slits", 1e-9, [&] {
    const BipartiteWave p = build_double_slit(sg, left, left, SlitMode::Particle);
    const std::size_t r = schmidt_rank(p, 1e-10);
    const double err = relative_error(position_density(p), position_density(build_double_slit(sg, left, left, SlitMode::Wave)));
    return Measure{err, r == 1 && err <= 1e-9, "rank " + std::to_string(r)};
  });
  run.check("observables.single_slit_limit", 1e-9, [&] {
    SlitSpec off = right;
    off.amplitude = 0.0;
    const Eigen::VectorXd got = position_density(build_double_slit(sg, left, off, SlitMode::Wave));
    return at_most(relative_error(got, unit_density(sg, p1.values.cwiseAbs2())), 1e-9);
  });
  run.check("observables.visibility_cos2", 1e-9, [&] {
    const Grid vg = make_grid(0.0, 1.0, 99);
    Eigen::VectorXd d(static_cast<Eigen::Index>(vg.n_points));
    for (std::size_t i = 0; i < vg.n_points; ++i) d[static_cast<Eigen::Index>(i)] = std::pow(std::cos(5.0 * std::numbers::pi * vg.site(i)), 2);
    const auto v = fringe_visibility(vg, {d.data(), vg.n_points}, 0.0, 1.0);
    return v ? at_most(std::abs(*v - 1.0), 1e-9) : Measure{NAN, false, "visibility undefined"};
  });
  run.check("observables.visibility_flat_undefined", 0.0, [&] {
    const std::vector<double> flat(50, 1.0);
    const auto v = fringe_visibility(make_grid(0.0, 1.0, 50), flat, 0.0, 1.0);
    return Measure{v.value_or(0.0), !v.has_value(), v ? "defined for a constant density" : ""};
  });
}

void phase_checks(Runner& run) {
  std::optional<EvolveResult> r;
  run.check("dynamics.stationary_phase_gap", 1e-6, [&] {
    r = run_evolve(ScenarioConfig::parse(std::string(builtin_scenario("stationary-phase"))));
    return at_most(std::abs(*r->demapped_gap - *r->eigensolve_gap) / std::abs(*r->eigensolve_gap), 1e-6);
  });
  if (!r) return;
  run.check("dynamics.stationary_phase_analytic", 1e-3, [&] { return at_most(std::abs(*r->demapped_gap - 1.0), 1e-3); });
  run.check("dynamics.stationary_phase_norm_drift", 1e-11, [&] { return at_most(r->max_norm_drift, 1e-11); });
  run.check("dynamics.stationary_phase_convergence_order", 0.1, [&] {
    const double order = r->convergence_order.value_or(NAN);
    return Measure{order, order >= 1.9 && order <= 2.1, "fitted order " + std::to_string(order)};
  });
}

void screen_checks(Runner& run) {
  std::optional<DoubleSlitScenario> s;
  std::optional<DoubleSlitResult> r;
  run.check("observables.screen_wave_visibility", 0.9, [&] {
    s = double_slit_scenario(ScenarioConfig::parse(std::string(builtin_scenario("doubleslit"))));
    s->schmidt = false;
    r = run_double_slit(*s);
    const double v = r->visibility_wave.value_or(NAN);
    return Measure{v, v >= s->wave_visibility_min.value_or(0.9), r->visibility_wave ? "" : "visibility undefined"};
  });
  if (!r) return;
  run.check("observables.screen_particle_visibility", 0.05, [&] {
    const double v = r->visibility_particle.value_or(NAN);
    return Measure{v, v <= s->particle_visibility_max.value_or(0.05), r->visibility_particle ? "" : "visibility undefined"};
  });
  run.check("dynamics.screen_norm_drift", 1e-11, [&] { return at_most(r->max_norm_drift, 1e-11); });
}

}  // namespace

std::vector<NamedHamiltonian> builtin_hamiltonians(std::size_t n, const PhysicalConstants& c) {
  std::vector<NamedHamiltonian> out;
  const Grid box = make_grid(0.0, 1.0, n);
  out.push_back({"box", build_hamiltonian(box, potentials::Box{}, c)});
  const Grid free = make_grid(-5.0, 5.0, n);
  out.push_back({"free", build_hamiltonian(free, potentials::Free{}, c)});
  const Grid osc = make_grid(-10.0, 10.0, n);
  out.push_back({"harmonic", build_hamiltonian(osc, potentials::HarmonicOscillator{1.0}, c)});
  out.push_back({"double_well", build_hamiltonian(free, potentials::DoubleWell{5.0, 4.0}, c)});
  const Grid tab = make_grid(-3.0, 3.0, n);
  potentials::Tabulated table;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = tab.site(i);
    table.values.push_back(2.0 + std::sin(3.0 * x) + 0.5 * x * x);
  }
  out.push_back({"tabulated", build_hamiltonian(tab, table, c)});
  return out;
}

std::vector<CheckResult> run_all(const Options& opts) {
  if (opts.sizes.empty()) throw InvalidArgument("validate: no sizes given");
  Runner run(opts);
  std::mt19937_64 rng(opts.seed);
  grid_checks(run, rng);
  hamiltonian_checks(run, builtin_hamiltonians(opts.sizes.back()));
  spectrum_checks(run, rng);
  if (opts.analytic) analytic_checks(run);
  dynamics_checks(run, rng);
  schmidt_checks(run, rng);
  observable_checks(run, rng);
  if (opts.phase) phase_checks(run);
  if (opts.double_slit) screen_checks(run);
  return run.take();
}

}  // namespace gapwave::validate
