#include "gapwave/observables.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gapwave/error.hpp"

namespace gapwave {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Tridiagonal action along columns with real diagonal d and off-diagonal coefficients.
Eigen::MatrixXcd tridiag_columns(const Eigen::MatrixXcd& b, const Eigen::VectorXcd& diag, cd lower, cd upper) {
  const Eigen::Index n = b.rows();
  Eigen::MatrixXcd out = diag.asDiagonal() * b;
  if (n > 1) {
    out.bottomRows(n - 1) += lower * b.topRows(n - 1);
    out.topRows(n - 1) += upper * b.bottomRows(n - 1);
  }
  return out;
}

void require_normalized(const BipartiteWave& psi, const char* where) {
  const double n = norm(psi);
  if (std::abs(n - 1.0) > 1e-8)
    throw InvalidArgument(std::string(where) + ": state is not normalized (norm " + std::to_string(n) + ")");
}

}  // namespace

LinearObservable dense_observable(Eigen::MatrixXcd m) {
  if (m.rows() != m.cols()) throw InvalidArgument("dense observable must be square");
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-10 * scale) throw InvalidArgument("dense observable is not Hermitian");
  return observables::DenseMatrix{std::move(m)};
}

Eigen::MatrixXcd apply_observable(const LinearObservable& o, const Grid& g, const Eigen::MatrixXcd& block) {
  const auto n = static_cast<Eigen::Index>(g.n_points);
  if (block.rows() != n) throw GridMismatch("apply_observable: block does not live on this grid");
  return std::visit(
      overloaded{
          [&](const observables::Position&) -> Eigen::MatrixXcd {
            return g.sites().cast<cd>().asDiagonal() * block;
          },
          [&](const observables::Momentum& p) -> Eigen::MatrixXcd {
            // -i hbar (psi_{i+1} - psi_{i-1}) / 2dx
            const cd c(0.0, -p.hbar / (2.0 * g.dx));
            return tridiag_columns(block, Eigen::VectorXcd::Zero(n), -c, c);
          },
          [&](const observables::Energy& e) -> Eigen::MatrixXcd {
            require_same_grid(e.hamiltonian.grid, g, "apply_observable");
            const cd off = e.hamiltonian.off_diagonal;
            return tridiag_columns(block, e.hamiltonian.diagonal.cast<cd>(), off, off);
          },
          [&](const observables::DiagonalTabulated& d) -> Eigen::MatrixXcd {
            if (d.values.size() != g.n_points) throw GridMismatch("diagonal observable length mismatch");
            return Eigen::Map<const Eigen::VectorXd>(d.values.data(), n).cast<cd>().asDiagonal() * block;
          },
          [&](const observables::DenseMatrix& d) -> Eigen::MatrixXcd {
            if (d.matrix.rows() != n) throw GridMismatch("dense observable size mismatch");
            return d.matrix * block;
          },
      },
      o);
}

WaveFunction apply_observable(const LinearObservable& o, const WaveFunction& psi) {
  return {psi.grid, apply_observable(o, psi.grid, Eigen::MatrixXcd(psi.values)).col(0)};
}

Eigen::MatrixXcd observable_matrix(const LinearObservable& o, const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.n_points);
  return apply_observable(o, g, Eigen::MatrixXcd::Identity(n, n));
}

double one_body_expectation(const WaveFunction& psi, const LinearObservable& o) {
  const cd v = inner_product(psi, apply_observable(o, psi));
  return v.real();
}

WaveFunction DensityOperator::apply(const WaveFunction& phi) const {
  require_same_grid(grid, phi.grid, "DensityOperator::apply");
  return {grid, matrix * phi.values};
}

DensityOperator rho_of(const BipartiteWave& psi) { return {psi.grid, psi.grid.dx * psi.amplitudes}; }

ExpectationValue expectation_detail(const BipartiteWave& psi, const LinearObservable& o) {
  require_normalized(psi, "expectation");
  const Eigen::MatrixXcd r = psi.grid.dx * psi.amplitudes;
  const Eigen::MatrixXcd orr = apply_observable(o, psi.grid, r);
  // Tr[R^dag O R] = sum_ij conj(R_ij) (O R)_ij
  const cd tr = (r.array().conjugate() * orr.array()).sum();
  if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::abs(tr.real())))
    throw InvalidArgument("expectation: trace has imaginary part " + std::to_string(tr.imag()) +
                          "; observable is not Hermitian");
  ExpectationValue e;
  e.raw = tr.real();
  e.trace_weight = r.squaredNorm();
  e.renormalized = e.raw / e.trace_weight;
  return e;
}

double expectation(const BipartiteWave& psi, const LinearObservable& o) { return expectation_detail(psi, o).raw; }

double purity(const BipartiteWave& psi) {
  const Eigen::MatrixXcd r = psi.grid.dx * psi.amplitudes;
  const Eigen::MatrixXcd g = r.adjoint() * r;
  const double t = g.trace().real();
  if (!(t > 0.0)) throw InvalidArgument("purity: zero state");
  return g.squaredNorm() / (t * t);
}

Eigen::VectorXd position_density(const BipartiteWave& psi) {
  require_normalized(psi, "position_density");
  // diag(R R^dag)_i = sum_j |R_ij|^2
  Eigen::VectorXd d = psi.amplitudes.rowwise().squaredNorm();
  return d / (psi.grid.dx * d.sum());
}

WaveFunction slit_wave(const Grid& g, const SlitSpec& s) {
  if (!(s.width > 0.0)) throw InvalidArgument("slit width must be positive");
  if (!std::isfinite(s.center) || !std::isfinite(s.transverse_momentum) || !std::isfinite(s.amplitude))
    throw InvalidArgument("slit parameters must be finite");
  // |phi|^2 is a normal density with standard deviation `width`.
  const double z = s.width * std::numbers::sqrt2;
  const double outside =
      0.5 * std::erfc((s.center - g.x_min) / z) + 0.5 * std::erfc((g.x_max - s.center) / z);
  if (outside > 1e-8)
    throw InvalidArgument("slit at " + std::to_string(s.center) + " leaks " + std::to_string(outside) +
                          " of its probability outside the grid");
  WaveFunction w = WaveFunction::zeros(g);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double x = g.site(i);
    const double env = std::exp(-(x - s.center) * (x - s.center) / (4.0 * s.width * s.width));
    w.values[static_cast<Eigen::Index>(i)] = std::polar(env, s.transverse_momentum * x);
  }
  w = normalized(w);
  w.values *= s.amplitude;
  return w;
}

BipartiteWave double_slit_from_states(const WaveFunction& phi1, const WaveFunction& phi2, SlitMode mode) {
  require_same_grid(phi1.grid, phi2.grid, "double slit");
  if (mode == SlitMode::Wave) {
    WaveFunction chi{phi1.grid, phi1.values + phi2.values};
    return normalized(BipartiteWave::outer(chi, chi));
  }
  BipartiteWave p = BipartiteWave::outer(phi1, phi1);
  p.amplitudes += phi2.values * phi2.values.adjoint();
  return normalized(p);
}

BipartiteWave build_double_slit(const Grid& g, const SlitSpec& slit1, const SlitSpec& slit2, SlitMode mode) {
  return double_slit_from_states(slit_wave(g, slit1), slit_wave(g, slit2), mode);
}

Eigen::VectorXd double_slit_density(const WaveFunction& phi1, const WaveFunction& phi2, SlitMode mode) {
  require_same_grid(phi1.grid, phi2.grid, "double slit");
  Eigen::VectorXd d;
  if (mode == SlitMode::Wave) {
    d = (phi1.values + phi2.values).cwiseAbs2();
  } else {
    // rho rho^dag for phi1 phi1* + phi2 phi2*, diagonal entries
    const cd s12 = phi1.values.dot(phi2.values);
    const cd s11 = phi1.values.squaredNorm();
    const cd s22 = phi2.values.squaredNorm();
    const Eigen::ArrayXcd a = phi1.values.array();
    const Eigen::ArrayXcd b = phi2.values.array();
    // s12 = sum conj(a_j) b_j
    d = (a * a.conjugate() * s11 + b * b.conjugate() * s22 + a * b.conjugate() * s12 +
         b * a.conjugate() * std::conj(s12))
            .real();
  }
  return d / (phi1.grid.dx * d.sum());
}

std::optional<double> fringe_visibility(const Grid& g, std::span<const double> density, double lo, double hi) {
  if (density.size() != g.n_points) throw GridMismatch("fringe_visibility: density length mismatch");
  if (!(lo < hi) || lo < g.x_min || hi > g.x_max)
    throw InvalidArgument("fringe_visibility: window must be an increasing interval inside the grid");
  std::vector<double> extrema;
  for (std::size_t i = 1; i + 1 < density.size(); ++i) {
    const double x = g.site(i);
    if (x < lo || x > hi) continue;
    const double prev = density[i - 1], cur = density[i], next = density[i + 1];
    const bool peak = cur > prev && cur >= next;
    const bool trough = cur < prev && cur <= next;
    if (peak || trough) extrema.push_back(cur);
  }
  if (extrema.size() < 3) return std::nullopt;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < extrema.size(); ++k) {
    const double hi_v = std::max(extrema[k], extrema[k + 1]);
    const double lo_v = std::min(extrema[k], extrema[k + 1]);
    sum += (hi_v + lo_v) > 0.0 ? (hi_v - lo_v) / (hi_v + lo_v) : 0.0;
  }
  return sum / static_cast<double>(extrema.size() - 1);
}

}  // namespace gapwave
