#include "ariel/kernels.hpp"

#include <algorithm>
#include <cstddef>
#include <cstring>
#include <vector>

#ifdef ARIEL_HAVE_OPENMP
#include <omp.h>
#endif

namespace ariel::kernels {
namespace {

constexpr std::size_t kRowBlock = 4;
constexpr std::size_t kColBlock = 8;

// Strided matrix view: element (r, c) is data[r*row_stride + c*col_stride].
struct StridedView {
  const double* data;
  std::size_t row_stride;
  std::size_t col_stride;
  double at(std::size_t r, std::size_t c) const { return data[r * row_stride + c * col_stride]; }
};

// Full column panels of the right operand, each stored as k rows of kColBlock
// contiguous values.
std::vector<double> pack_panels(const StridedView& b, std::size_t k, std::size_t n) {
  const std::size_t panels = n / kColBlock;
  std::vector<double> out(panels * k * kColBlock);
  for (std::size_t q = 0; q < panels; ++q)
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t j = 0; j < kColBlock; ++j) out[(q * k + p) * kColBlock + j] = b.at(p, q * kColBlock + j);
  return out;
}

using Lanes = double __attribute__((vector_size(4 * sizeof(double))));
static_assert(kRowBlock == 4 && kColBlock == 8);

inline void load_lanes(Lanes& dst, const double* src) { std::memcpy(&dst, src, sizeof(dst)); }

inline void store_lanes(double* dst, const Lanes& v) { std::memcpy(dst, &v, sizeof(v)); }

// One kRowBlock x kColBlock tile of C, accumulated in registers. Each entry
// is summed from 0.0 over p in ascending order; p is skipped when the whole
// row block is zero there (otherwise zero entries add exact zeros).
inline void micro_tile(const StridedView& a, std::size_t i0, std::size_t j0, std::size_t k, std::size_t n,
                       const double* panel, double* c) {
  Lanes c00{}, c01{}, c10{}, c11{}, c20{}, c21{}, c30{}, c31{};
  const double* a0 = a.data + i0 * a.row_stride;
  const double* a1 = a0 + a.row_stride;
  const double* a2 = a1 + a.row_stride;
  const double* a3 = a2 + a.row_stride;
  for (std::size_t p = 0; p < k; ++p) {
    const std::size_t off = p * a.col_stride;
    const double l0 = a0[off], l1 = a1[off], l2 = a2[off], l3 = a3[off];
    if (l0 == 0.0 && l1 == 0.0 && l2 == 0.0 && l3 == 0.0) continue;
    Lanes b0, b1;
    load_lanes(b0, panel + p * kColBlock);
    load_lanes(b1, panel + p * kColBlock + 4);
    c00 += (Lanes{} + l0) * b0;
    c01 += (Lanes{} + l0) * b1;
    c10 += (Lanes{} + l1) * b0;
    c11 += (Lanes{} + l1) * b1;
    c20 += (Lanes{} + l2) * b0;
    c21 += (Lanes{} + l2) * b1;
    c30 += (Lanes{} + l3) * b0;
    c31 += (Lanes{} + l3) * b1;
  }
  double* out = c + i0 * n + j0;
  store_lanes(out, c00);
  store_lanes(out + 4, c01);
  store_lanes(out + n, c10);
  store_lanes(out + n + 4, c11);
  store_lanes(out + 2 * n, c20);
  store_lanes(out + 2 * n + 4, c21);
  store_lanes(out + 3 * n, c30);
  store_lanes(out + 3 * n + 4, c31);
}

inline void edge_tile(const StridedView& a, std::size_t i0, std::size_t rows, std::size_t j0, std::size_t cols,
                      std::size_t k, std::size_t n, const StridedView& b, double* c) {
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        const double v = a.at(i0 + r, p);
        if (v != 0.0) acc += v * b.at(p, j0 + j);
      }
      c[(i0 + r) * n + j0 + j] = acc;
    }
}

// Rows [i0, i0+rows) of C = A·B with rows <= kRowBlock.
__attribute__((target_clones("avx2", "default"), flatten)) void row_block(
    const StridedView& a, std::size_t i0, std::size_t rows, std::size_t k, std::size_t n, const StridedView& b,
    const double* panels, double* c) {
  const std::size_t full_cols = n - n % kColBlock;
  if (rows == kRowBlock) {
    for (std::size_t j0 = 0; j0 < full_cols; j0 += kColBlock)
      micro_tile(a, i0, j0, k, n, panels + j0 * k, c);
  } else {
    for (std::size_t j0 = 0; j0 < full_cols; j0 += kColBlock)
      edge_tile(a, i0, rows, j0, kColBlock, k, n, b, c);
  }
  if (full_cols < n) edge_tile(a, i0, rows, full_cols, n - full_cols, k, n, b, c);
}

void run_serial(const StridedView& a, const StridedView& b, std::size_t m, std::size_t k, std::size_t n,
                double* c) {
  const std::vector<double> panels = pack_panels(b, k, n);
  for (std::size_t i0 = 0; i0 < m; i0 += kRowBlock)
    row_block(a, i0, std::min(kRowBlock, m - i0), k, n, b, panels.data(), c);
}

void run_parallel(const StridedView& a, const StridedView& b, std::size_t m, std::size_t k, std::size_t n,
                  double* c) {
  const std::vector<double> panels = pack_panels(b, k, n);
  const auto blocks = static_cast<std::ptrdiff_t>((m + kRowBlock - 1) / kRowBlock);
#ifdef ARIEL_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const std::size_t i0 = static_cast<std::size_t>(blk) * kRowBlock;
    row_block(a, i0, std::min(kRowBlock, m - i0), k, n, b, panels.data(), c);
  }
}

}  // namespace

namespace serial {

void gemm_nn(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c) {
  run_serial({a.data(), k, 1}, {b.data(), n, 1}, m, k, n, c.data());
}

void gemm_tn(std::size_t k, std::size_t m, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c) {
  run_serial({a.data(), 1, m}, {b.data(), n, 1}, m, k, n, c.data());
}

void gemm_nt(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c) {
  run_serial({a.data(), k, 1}, {b.data(), 1, k}, m, k, n, c.data());
}

}  // namespace serial

void gemm_nn(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c) {
  run_parallel({a.data(), k, 1}, {b.data(), n, 1}, m, k, n, c.data());
}

void gemm_tn(std::size_t k, std::size_t m, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c) {
  run_parallel({a.data(), 1, m}, {b.data(), n, 1}, m, k, n, c.data());
}

void gemm_nt(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c) {
  run_parallel({a.data(), k, 1}, {b.data(), 1, k}, m, k, n, c.data());
}

int max_threads() {
#ifdef ARIEL_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ariel::kernels
