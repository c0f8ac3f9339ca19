#include <algorithm>
#include <cmath>
#include <string>

#include "gapwave/error.hpp"
#include "gapwave/kernels.hpp"
#include "kernels_detail.hpp"

namespace gapwave::kernels {

namespace detail {

void check_shape(std::size_t op, std::size_t line, std::size_t have, std::size_t need,
                 const char* where) {
  if (op != line || have < need || line == 0)
    throw InvalidArgument(std::string(where) + ": operator/data shape mismatch");
}

}  // namespace detail

TridiagLU factorize(const Tridiag& a) {
  const std::size_t n = a.size();
  if (n == 0) throw InvalidArgument("factorize: empty operator");
  TridiagLU lu;
  lu.off = a.off;
  lu.inv_pivot.resize(n);
  lu.upper.resize(n);
  cd prev_upper{};
  for (std::size_t i = 0; i < n; ++i) {
    const cd pivot = i == 0 ? a.diag[0] : a.diag[i] - a.off * prev_upper;
    if (pivot == cd{} || !std::isfinite(pivot.real()) || !std::isfinite(pivot.imag()))
      throw ConvergenceError("tridiagonal solve: singular pivot at row " + std::to_string(i));
    lu.inv_pivot[i] = 1.0 / pivot;
    lu.upper[i] = a.off * lu.inv_pivot[i];
    prev_upper = lu.upper[i];
  }
  return lu;
}

void apply(const Tridiag& a, std::span<const cd> in, std::span<cd> out) {
  detail::check_shape(a.size(), in.size(), out.size(), in.size(), "apply");
  detail::apply_line(a, in.data(), out.data(), in.size(), 1);
}

void solve_inplace(const TridiagLU& lu, std::span<cd> x) {
  detail::check_shape(lu.size(), x.size(), x.size(), x.size(), "solve_inplace");
  detail::solve_line(lu, x.data(), x.size());
}

namespace serial {

void apply_columns(const Tridiag& a, std::span<const cd> in, std::span<cd> out, std::size_t rows,
                   std::size_t cols) {
  detail::check_shape(a.size(), rows, std::min(in.size(), out.size()), rows * cols, "apply_columns");
  for (std::size_t j = 0; j < cols; ++j)
    detail::apply_line(a, in.data() + j * rows, out.data() + j * rows, rows, 1);
}

void apply_rows(const Tridiag& a, std::span<const cd> in, std::span<cd> out, std::size_t rows,
                std::size_t cols) {
  detail::check_shape(a.size(), cols, std::min(in.size(), out.size()), rows * cols, "apply_rows");
  for (std::size_t j = 0; j < cols; ++j)
    detail::apply_rows_column(a, in.data(), out.data(), rows, cols, j);
}

void solve_columns(const TridiagLU& lu, std::span<cd> data, std::size_t rows, std::size_t cols) {
  detail::check_shape(lu.size(), rows, data.size(), rows * cols, "solve_columns");
  for (std::size_t j = 0; j < cols; ++j) detail::solve_line(lu, data.data() + j * rows, rows);
}

void solve_rows(const TridiagLU& lu, std::span<cd> data, std::size_t rows, std::size_t cols) {
  detail::check_shape(lu.size(), cols, data.size(), rows * cols, "solve_rows");
  detail::solve_row_block(lu, data.data(), rows, cols, 0, rows);
}

void gap_apply(std::span<const double> diag, double off, std::span<const cd> in, std::span<cd> out,
               std::size_t n) {
  detail::check_shape(diag.size(), n, std::min(in.size(), out.size()), n * n, "gap_apply");
  for (std::size_t j = 0; j < n; ++j) detail::gap_column(diag.data(), off, in.data(), out.data(), n, j);
}

void gap_matrix(std::span<const double> diag, double off, std::span<double> out, std::size_t n) {
  detail::check_shape(diag.size(), n, out.size(), n * n * n * n, "gap_matrix");
  for (std::size_t q = 0; q < n * n; ++q) detail::gap_matrix_column(diag.data(), off, out.data(), n, q);
}

}  // namespace serial
}  // namespace gapwave::kernels
