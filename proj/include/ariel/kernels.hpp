#pragma once

#include <cstddef>
#include <span>

// Dense GEMM kernels. Every kernel exists twice: a serial reference under
// kernels::serial and an OpenMP variant under kernels. Both accumulate each
// output entry in ascending inner-index order and skip zero left-hand
// entries identically, so their results are bit-identical for any thread
// count.
namespace ariel::kernels {

/// C(m×n) = A(m×k) · B(k×n)
void gemm_nn(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c);

/// C(m×n) = A(k×m)ᵀ · B(k×n)
void gemm_tn(std::size_t k, std::size_t m, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c);

/// C(m×n) = A(m×k) · B(n×k)ᵀ
void gemm_nt(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c);

/// Threads the parallel kernels will use (1 when built without OpenMP).
int max_threads();

namespace serial {

void gemm_nn(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c);
void gemm_tn(std::size_t k, std::size_t m, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c);
void gemm_nt(std::size_t m, std::size_t k, std::size_t n, std::span<const double> a,
             std::span<const double> b, std::span<double> c);

}  // namespace serial
}  // namespace ariel::kernels
