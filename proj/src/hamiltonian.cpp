#include "gapwave/hamiltonian.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
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

}  // namespace

std::string_view potential_name(const Potential& u) {
  return std::visit(overloaded{
                        [](const potentials::Free&) { return std::string_view("free"); },
                        [](const potentials::HarmonicOscillator&) { return std::string_view("harmonic"); },
                        [](const potentials::Box&) { return std::string_view("box"); },
                        [](const potentials::DoubleWell&) { return std::string_view("double_well"); },
                        [](const potentials::Tabulated&) { return std::string_view("tabulated"); },
                    },
                    u);
}

Eigen::VectorXd evaluate_potential(const Potential& u, const Grid& g, const PhysicalConstants& c) {
  const auto n = static_cast<Eigen::Index>(g.n_points);
  const Eigen::VectorXd x = g.sites();
  Eigen::VectorXd v = std::visit(
      overloaded{
          [&](const potentials::Free&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(n); },
          [&](const potentials::Box&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(n); },
          [&](const potentials::HarmonicOscillator& p) -> Eigen::VectorXd {
            if (!(p.omega > 0.0)) throw InvalidArgument("harmonic potential: omega must be positive");
            return 0.5 * c.mass * p.omega * p.omega * x.array().square();
          },
          [&](const potentials::DoubleWell& p) -> Eigen::VectorXd {
            if (!(p.well_separation > 0.0))
              throw InvalidArgument("double well: well_separation must be positive");
            const double a = 0.5 * p.well_separation;
            return p.barrier_height * (x.array().square() / (a * a) - 1.0).square();
          },
          [&](const potentials::Tabulated& p) -> Eigen::VectorXd {
            if (p.values.size() != g.n_points)
              throw InvalidArgument("tabulated potential has " + std::to_string(p.values.size()) +
                                    " values for " + std::to_string(g.n_points) + " sites");
            return Eigen::Map<const Eigen::VectorXd>(p.values.data(), n);
          },
      },
      u);
  if (!v.allFinite()) throw InvalidArgument("potential is not finite on every lattice site");
  return v;
}

Eigen::MatrixXd HamiltonianOp::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = diagonal;
  m.diagonal(1).setConstant(off_diagonal);
  m.diagonal(-1).setConstant(off_diagonal);
  return m;
}

double HamiltonianOp::spectral_bound() const {
  return diagonal.cwiseAbs().maxCoeff() + 2.0 * std::abs(off_diagonal);
}

HamiltonianOp build_hamiltonian(const Grid& g, const Potential& u, const PhysicalConstants& c) {
  validate_constants(c);
  const double kinetic = c.hbar * c.hbar / (c.mass * g.dx * g.dx);
  HamiltonianOp h;
  h.grid = g;
  h.constants = c;
  h.diagonal = evaluate_potential(u, g, c).array() + kinetic;
  h.off_diagonal = -0.5 * kinetic;
  return h;
}

WaveFunction apply_hamiltonian(const HamiltonianOp& h, const WaveFunction& psi) {
  require_same_grid(h.grid, psi.grid, "apply_hamiltonian");
  const auto n = psi.values.size();
  WaveFunction out = WaveFunction::zeros(psi.grid);
  const auto& p = psi.values;
  for (Eigen::Index i = 0; i < n; ++i) {
    cd acc = h.diagonal[i] * p[i];
    if (i > 0) acc += h.off_diagonal * p[i - 1];
    if (i + 1 < n) acc += h.off_diagonal * p[i + 1];
    out.values[i] = acc;
  }
  return out;
}

potentials::Tabulated load_tabulated_potential(const std::filesystem::path& file, const Grid& g) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open tabulated potential '" + file.string() + "'");
  potentials::Tabulated t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double x = 0.0;
    double v = 0.0;
    if (!(row >> x)) continue;
    const std::string where = file.string() + ":" + std::to_string(line_no);
    if (!(row >> v)) throw FormatError(where + ": expected two columns (position energy)");
    if (!std::isfinite(x) || !std::isfinite(v)) throw FormatError(where + ": non-finite value");
    const std::size_t i = t.values.size();
    if (i >= g.n_points) throw FormatError(where + ": more rows than lattice sites");
    if (std::abs(x - g.site(i)) > 1e-9 * g.dx)
      throw FormatError(where + ": position does not match lattice site " + std::to_string(i));
    t.values.push_back(v);
  }
  if (t.values.size() != g.n_points)
    throw FormatError(file.string() + ": " + std::to_string(t.values.size()) + " rows for " +
                      std::to_string(g.n_points) + " lattice sites");
  return t;
}

}  // namespace gapwave
