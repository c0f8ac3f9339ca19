#include <algorithm>

#include "gapwave/kernels.hpp"
#include "kernels_detail.hpp"

#ifdef GAPWAVE_HAVE_OPENMP
#include <omp.h>
#endif

namespace gapwave::kernels {

int max_threads() {
#ifdef GAPWAVE_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

namespace {
// Row block for the y-direction sweep; wide enough to stream whole cache lines.
constexpr std::size_t kRowBlock = 64;

using index_t = long long;
}  // namespace

void apply_columns(const Tridiag& a, std::span<const cd> in, std::span<cd> out, std::size_t rows,
                   std::size_t cols) {
  detail::check_shape(a.size(), rows, std::min(in.size(), out.size()), rows * cols, "apply_columns");
  const cd* src = in.data();
  cd* dst = out.data();
#pragma omp parallel for schedule(static)
  for (index_t j = 0; j < static_cast<index_t>(cols); ++j)
    detail::apply_line(a, src + j * rows, dst + j * rows, rows, 1);
}

void apply_rows(const Tridiag& a, std::span<const cd> in, std::span<cd> out, std::size_t rows,
                std::size_t cols) {
  detail::check_shape(a.size(), cols, std::min(in.size(), out.size()), rows * cols, "apply_rows");
  const cd* src = in.data();
  cd* dst = out.data();
#pragma omp parallel for schedule(static)
  for (index_t j = 0; j < static_cast<index_t>(cols); ++j)
    detail::apply_rows_column(a, src, dst, rows, cols, static_cast<std::size_t>(j));
}

void solve_columns(const TridiagLU& lu, std::span<cd> data, std::size_t rows, std::size_t cols) {
  detail::check_shape(lu.size(), rows, data.size(), rows * cols, "solve_columns");
  cd* base = data.data();
#pragma omp parallel for schedule(static)
  for (index_t j = 0; j < static_cast<index_t>(cols); ++j) detail::solve_line(lu, base + j * rows, rows);
}

void solve_rows(const TridiagLU& lu, std::span<cd> data, std::size_t rows, std::size_t cols) {
  detail::check_shape(lu.size(), cols, data.size(), rows * cols, "solve_rows");
  cd* base = data.data();
  const auto blocks = static_cast<index_t>((rows + kRowBlock - 1) / kRowBlock);
#pragma omp parallel for schedule(static)
  for (index_t b = 0; b < blocks; ++b) {
    const std::size_t r0 = static_cast<std::size_t>(b) * kRowBlock;
    detail::solve_row_block(lu, base, rows, cols, r0, std::min(rows, r0 + kRowBlock));
  }
}

void gap_apply(std::span<const double> diag, double off, std::span<const cd> in, std::span<cd> out,
               std::size_t n) {
  detail::check_shape(diag.size(), n, std::min(in.size(), out.size()), n * n, "gap_apply");
  const cd* src = in.data();
  cd* dst = out.data();
#pragma omp parallel for schedule(static)
  for (index_t j = 0; j < static_cast<index_t>(n); ++j)
    detail::gap_column(diag.data(), off, src, dst, n, static_cast<std::size_t>(j));
}

void gap_matrix(std::span<const double> diag, double off, std::span<double> out, std::size_t n) {
  detail::check_shape(diag.size(), n, out.size(), n * n * n * n, "gap_matrix");
  double* dst = out.data();
#pragma omp parallel for schedule(static)
  for (index_t q = 0; q < static_cast<index_t>(n * n); ++q)
    detail::gap_matrix_column(diag.data(), off, dst, n, static_cast<std::size_t>(q));
}

}  // namespace omp
}  // namespace gapwave::kernels
