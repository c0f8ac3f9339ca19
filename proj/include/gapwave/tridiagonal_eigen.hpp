#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gapwave {

struct TridiagonalEigenResult {
  std::vector<double> values;  // ascending
  Eigen::MatrixXd vectors;     // column k pairs with values[k]; Euclidean-orthonormal
};

/// Eigenpairs of a real symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-style shifts and deflation.
///
/// `off` holds the n-1 couplings between sites i and i+1. Each eigenvalue may
/// take at most `max_iterations` QL sweeps; exceeding that throws
/// ConvergenceError. Eigenvector signs are fixed so the first component whose
/// magnitude exceeds 1e-3 of the vector's largest is positive.
TridiagonalEigenResult symmetric_tridiagonal_eigen(std::span<const double> diag,
                                                   std::span<const double> off,
                                                   bool want_vectors = true,
                                                   int max_iterations = 60);

}  // namespace gapwave
