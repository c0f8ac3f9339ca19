#include "gapwave/tridiagonal_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gapwave/error.hpp"

namespace gapwave {

TridiagonalEigenResult symmetric_tridiagonal_eigen(std::span<const double> diag,
                                                   std::span<const double> off, bool want_vectors,
                                                   int max_iterations) {
  const std::size_t n = diag.size();
  if (n == 0) throw InvalidArgument("tridiagonal eigensolver: empty matrix");
  if (off.size() + 1 != n) throw InvalidArgument("tridiagonal eigensolver: need n-1 couplings");

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());
  Eigen::MatrixXd v;
  if (want_vectors) v = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  const double eps = std::numeric_limits<double>::epsilon();
  double shift_total = 0.0;
  double scale = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    scale = std::max(scale, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * scale) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iterations)
          throw ConvergenceError("tridiagonal eigensolver: no convergence for eigenvalue " +
                                 std::to_string(l) + " after " + std::to_string(max_iterations) +
                                 " iterations");
        // Shift from the leading 2x2 block.
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        shift_total += h;

        // Implicit QL sweep from m back to l.
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (want_vectors) {
            auto a = v.col(static_cast<Eigen::Index>(ii));
            auto b = v.col(static_cast<Eigen::Index>(ii + 1));
            for (Eigen::Index k = 0; k < a.size(); ++k) {
              const double t = b[k];
              b[k] = s * a[k] + c * t;
              a[k] = c * a[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * scale);
    }
    d[l] += shift_total;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigenResult out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (want_vectors) {
    out.vectors.resize(v.rows(), v.cols());
    for (std::size_t k = 0; k < n; ++k) {
      Eigen::VectorXd col = v.col(static_cast<Eigen::Index>(order[k]));
      const double big = col.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < col.size(); ++i) {
        if (std::abs(col[i]) > 1e-3 * big) {
          if (col[i] < 0) col = -col;
          break;
        }
      }
      out.vectors.col(static_cast<Eigen::Index>(k)) = col;
    }
  }
  return out;
}

}  // namespace gapwave
