#pragma once

// Batched tridiagonal kernels over square or rectangular column-major
// matrices. Each kernel exists twice: `serial` is the reference and `omp` the
// OpenMP-parallel version. Both perform the same floating-point operations in
// the same order per output element, so their results are bitwise identical;
// tests rely on that.
//
// "columns" kernels act along the row index i, independently for every
// column j (the x coordinate of a bipartite wave). "rows" kernels act along
// the column index j for every row i (the y coordinate).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gapwave::kernels {

using cd = std::complex<double>;

// Complex tridiagonal matrix with a uniform off-diagonal (both sides).
struct Tridiag {
  std::vector<cd> diag;
  cd off{};

  std::size_t size() const { return diag.size(); }
};

// LU factors of a Tridiag without pivoting.
struct TridiagLU {
  std::vector<cd> inv_pivot;
  std::vector<cd> upper;
  cd off{};

  std::size_t size() const { return inv_pivot.size(); }
};

// Throws ConvergenceError on a zero or non-finite pivot.
TridiagLU factorize(const Tridiag& a);

void apply(const Tridiag& a, std::span<const cd> in, std::span<cd> out);
void solve_inplace(const TridiagLU& lu, std::span<cd> x);

namespace serial {

void apply_columns(const Tridiag& a, std::span<const cd> in, std::span<cd> out, std::size_t rows,
                   std::size_t cols);
void apply_rows(const Tridiag& a, std::span<const cd> in, std::span<cd> out, std::size_t rows,
                std::size_t cols);
void solve_columns(const TridiagLU& lu, std::span<cd> data, std::size_t rows, std::size_t cols);
void solve_rows(const TridiagLU& lu, std::span<cd> data, std::size_t rows, std::size_t cols);

// out = H in - in H for an n x n matrix and real symmetric tridiagonal H.
void gap_apply(std::span<const double> diag, double off, std::span<const cd> in, std::span<cd> out,
               std::size_t n);

// Dense (n^2 x n^2, column-major) H (x) I - I (x) H with the row-major site
// flattening k = i * n + j.
void gap_matrix(std::span<const double> diag, double off, std::span<double> out, std::size_t n);

}  // namespace serial

namespace omp {

void apply_columns(const Tridiag& a, std::span<const cd> in, std::span<cd> out, std::size_t rows,
                   std::size_t cols);
void apply_rows(const Tridiag& a, std::span<const cd> in, std::span<cd> out, std::size_t rows,
                std::size_t cols);
void solve_columns(const TridiagLU& lu, std::span<cd> data, std::size_t rows, std::size_t cols);
void solve_rows(const TridiagLU& lu, std::span<cd> data, std::size_t rows, std::size_t cols);
void gap_apply(std::span<const double> diag, double off, std::span<const cd> in, std::span<cd> out,
               std::size_t n);
void gap_matrix(std::span<const double> diag, double off, std::span<double> out, std::size_t n);

}  // namespace omp

// Threads the omp kernels will use (1 without OpenMP).
int max_threads();

}  // namespace gapwave::kernels
