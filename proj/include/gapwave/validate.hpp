#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gapwave/hamiltonian.hpp"

namespace gapwave::validate {

struct CheckResult {
  std::string name;    // e.g. "spectrum.match_spectra[harmonic,N=16]"
  bool passed = false;
  double value = 0.0;  // measured deviation (or statistic)
  double tolerance = 0.0;
  std::string detail;
};

struct Options {
  std::vector<std::size_t> sizes{4, 8, 16, 32};
  double match_tol = 1e-8;
  std::uint64_t seed = 20240601;
  bool analytic = true;        // n_points = 400 box / oscillator spectra
  bool phase = true;           // stationary-phase gap extraction
  bool double_slit = true;     // static and screen-time double slit
  std::function<void(const CheckResult&)> on_result;
};

struct NamedHamiltonian {
  std::string name;
  HamiltonianOp op;
};

// One operator per built-in potential on an n-site grid.
std::vector<NamedHamiltonian> builtin_hamiltonians(std::size_t n, const PhysicalConstants& c = {});

std::vector<CheckResult> run_all(const Options& opts);

}  // namespace gapwave::validate
