#include <benchmark/benchmark.h>

#include "ariel/graph.hpp"
#include "ariel/kernels.hpp"
#include "ariel/rng.hpp"

namespace {

using namespace ariel;

// Â·(XW) shapes: dense n×n propagation times n×h features.
struct Operands {
  std::size_t n, h;
  Matrix a, b, c;
  explicit Operands(std::size_t n_, std::size_t h_) : n(n_), h(h_), c(n_, h_) {
    RngStream rng(0);
    SbmSpec spec{{n / 2, n - n / 2}, 0.05, 0.005, 1};
    a = normalize_adjacency(generate_sbm(spec, rng).adjacency());
    b = Matrix(n, h);
    for (double& v : b.values()) v = rng.gaussian();
  }
};

template <auto Kernel>
void propagate(benchmark::State& state) {
  Operands op(static_cast<std::size_t>(state.range(0)), 128);
  for (auto _ : state) {
    Kernel(op.n, op.n, op.h, op.a.values(), op.b.values(), op.c.values());
    benchmark::DoNotOptimize(op.c.data());
  }
  state.counters["threads"] = kernels::max_threads();
}

template <auto Kernel>
void gradient_tn(benchmark::State& state) {
  Operands op(static_cast<std::size_t>(state.range(0)), 128);
  Matrix out(op.n, op.h);
  for (auto _ : state) {
    Kernel(op.n, op.n, op.h, op.a.values(), op.b.values(), out.values());
    benchmark::DoNotOptimize(out.data());
  }
}

// Similarity-matrix shape: Z·Zᵀ for 500 projected rows of width 128.
template <auto Kernel>
void similarity_nt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream rng(1);
  Matrix z(n, 128), out(n, n);
  for (double& v : z.values()) v = rng.gaussian();
  for (auto _ : state) {
    Kernel(n, 128, n, z.values(), z.values(), out.values());
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(similarity_nt<ariel::kernels::serial::gemm_nt>)->Name("gemm_nt_dense/serial")->Arg(500);
BENCHMARK(similarity_nt<ariel::kernels::gemm_nt>)->Name("gemm_nt_dense/openmp")->Arg(500);
BENCHMARK(propagate<ariel::kernels::serial::gemm_nn>)->Name("gemm_nn/serial")->Arg(250)->Arg(500)->Arg(1000);
BENCHMARK(propagate<ariel::kernels::gemm_nn>)->Name("gemm_nn/openmp")->Arg(250)->Arg(500)->Arg(1000);
BENCHMARK(gradient_tn<ariel::kernels::serial::gemm_tn>)->Name("gemm_tn/serial")->Arg(500);
BENCHMARK(gradient_tn<ariel::kernels::gemm_tn>)->Name("gemm_tn/openmp")->Arg(500);

BENCHMARK_MAIN();
