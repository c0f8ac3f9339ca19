#pragma once

// Per-line bodies shared by the serial and OpenMP kernels. Keeping one
// definition guarantees both variants do identical arithmetic.

#include <cstddef>

#include "gapwave/kernels.hpp"

namespace gapwave::kernels::detail {

// out[i*stride] for one line of length n.
inline void apply_line(const Tridiag& a, const cd* in, cd* out, std::size_t n, std::size_t stride) {
  for (std::size_t i = 0; i < n; ++i) {
    cd acc = a.diag[i] * in[i * stride];
    if (i > 0) acc += a.off * in[(i - 1) * stride];
    if (i + 1 < n) acc += a.off * in[(i + 1) * stride];
    out[i * stride] = acc;
  }
}

inline void solve_line(const TridiagLU& lu, cd* x, std::size_t n) {
  x[0] *= lu.inv_pivot[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lu.off * x[i - 1]) * lu.inv_pivot[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= lu.upper[i] * x[i + 1];
}

// Sweep along columns j for the row block [r0, r1) of a column-major matrix.
inline void solve_row_block(const TridiagLU& lu, cd* data, std::size_t rows, std::size_t cols,
                            std::size_t r0, std::size_t r1) {
  for (std::size_t i = r0; i < r1; ++i) data[i] *= lu.inv_pivot[0];
  for (std::size_t j = 1; j < cols; ++j) {
    cd* col = data + j * rows;
    const cd* prev = col - rows;
    for (std::size_t i = r0; i < r1; ++i) col[i] = (col[i] - lu.off * prev[i]) * lu.inv_pivot[j];
  }
  for (std::size_t j = cols - 1; j-- > 0;) {
    cd* col = data + j * rows;
    const cd* next = col + rows;
    for (std::size_t i = r0; i < r1; ++i) col[i] -= lu.upper[j] * next[i];
  }
}

// Output column j of A applied along rows: combines input columns j-1, j, j+1.
inline void apply_rows_column(const Tridiag& a, const cd* in, cd* out, std::size_t rows,
                              std::size_t cols, std::size_t j) {
  const cd* c = in + j * rows;
  cd* o = out + j * rows;
  for (std::size_t i = 0; i < rows; ++i) {
    cd acc = a.diag[j] * c[i];
    if (j > 0) acc += a.off * c[i - rows];
    if (j + 1 < cols) acc += a.off * c[i + rows];
    o[i] = acc;
  }
}

// Column j of H*in - in*H.
inline void gap_column(const double* diag, double off, const cd* in, cd* out, std::size_t n,
                       std::size_t j) {
  const cd* c = in + j * n;
  cd* o = out + j * n;
  for (std::size_t i = 0; i < n; ++i) {
    cd hx = diag[i] * c[i];
    if (i > 0) hx += off * c[i - 1];
    if (i + 1 < n) hx += off * c[i + 1];
    cd hy = diag[j] * c[i];
    if (j > 0) hy += off * c[i - n];
    if (j + 1 < n) hy += off * c[i + n];
    o[i] = hx - hy;
  }
}

// Column q = k*n + l of the dense gap matrix, rows p = i*n + j:
// H_ik delta_jl - delta_ik H_jl.
inline void gap_matrix_column(const double* diag, double off, double* out, std::size_t n,
                              std::size_t q) {
  const std::size_t dim = n * n;
  double* col = out + q * dim;
  for (std::size_t p = 0; p < dim; ++p) col[p] = 0.0;
  const std::size_t k = q / n;
  const std::size_t l = q % n;
  // H_ik delta_jl: rows (i, l) for i in {k-1, k, k+1}
  col[k * n + l] += diag[k];
  if (k > 0) col[(k - 1) * n + l] += off;
  if (k + 1 < n) col[(k + 1) * n + l] += off;
  // -delta_ik H_jl: rows (k, j) for j in {l-1, l, l+1}
  col[k * n + l] -= diag[l];
  if (l > 0) col[k * n + l - 1] -= off;
  if (l + 1 < n) col[k * n + l + 1] -= off;
}

void check_shape(std::size_t op, std::size_t line, std::size_t have, std::size_t need,
                 const char* where);

}  // namespace gapwave::kernels::detail
