#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "ariel/graph.hpp"
#include "ariel/matrix.hpp"
#include "ariel/rng.hpp"

namespace ariel {

inline void PrintTo(const Matrix& m, std::ostream* os) {
  *os << m.rows() << "x" << m.cols() << " [";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    *os << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j) *os << (j ? " " : "") << m(i, j);
  }
  *os << "]";
}

}  // namespace ariel

namespace ariel::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, RngStream& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = scale * rng.gaussian();
  return m;
}

/// Erdős–Rényi graph with Gaussian features and labels in [0, classes).
inline Graph random_graph(std::size_t n, std::size_t d, double density, RngStream& rng, int classes = 2) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(density)) edges.push_back({i, j});
  std::vector<int> labels(n);
  for (auto& l : labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
  return Graph::from_edges(n, edges, random_matrix(n, d, rng), labels);
}

/// |a - b| / max(1, |a|, |b|) over entries.
inline double max_rel_error(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double x = a.values()[i], y = b.values()[i];
    worst = std::max(worst, std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)}));
  }
  return worst;
}

}  // namespace ariel::testing

namespace ariel::testing {

/// Finite-difference agreement: relative error ≤ rel, or absolute error ≤ abs_floor.
inline ::testing::AssertionResult gradients_match(const Matrix& analytic, const Matrix& numeric, double rel = 1e-4,
                                                  double abs_floor = 1e-8) {
  if (!analytic.same_shape(numeric)) return ::testing::AssertionFailure() << "shape mismatch";
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    const double a = analytic.values()[k], f = numeric.values()[k];
    const double err = std::abs(a - f);
    if (err > abs_floor && err > rel * std::max(std::abs(a), std::abs(f)))
      return ::testing::AssertionFailure() << "entry " << k << " (" << k / analytic.cols() << ","
                                           << k % analytic.cols() << "): analytic " << a << " vs numeric " << f;
  }
  return ::testing::AssertionSuccess();
}

/// Symmetric weighted adjacency with off-diagonal weights in [lo, hi].
inline Matrix random_weighted_adjacency(std::size_t n, RngStream& rng, double lo = 0.05, double hi = 0.95) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = lo + (hi - lo) * rng.uniform();
  return a;
}

/// Central differences over symmetric entry pairs (i<j probed jointly).
template <typename F>
Matrix symmetric_finite_diff(const F& f, const Matrix& a, double h = 1e-5) {
  Matrix g(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      Matrix plus = a, minus = a;
      plus(i, j) += h;
      plus(j, i) += h;
      minus(i, j) -= h;
      minus(j, i) -= h;
      g(i, j) = g(j, i) = (f(plus) - f(minus)) / (2 * h);
    }
  return g;
}

inline double min_abs(const Matrix& m) {
  double v = INFINITY;
  for (double x : m.values()) v = std::min(v, std::abs(x));
  return v;
}

}  // namespace ariel::testing

namespace ariel::testing {

inline double clipped_shift_sum(std::span<const double> z, double mu) {
  double s = 0.0;
  for (double v : z) s += std::clamp(v - mu, 0.0, 1.0);
  return s;
}

/// Brute-force dual shift: scan a uniform μ grid over [0, max z] for the
/// first feasible point, then rescan the cell before it at 1/1000 of the
/// spacing, until the spacing is below `resolution`.
inline double grid_dual_oracle(std::span<const double> z, double budget, double resolution = 1e-7) {
  double lo = 0.0, hi = *std::max_element(z.begin(), z.end());
  double step = (hi - lo) / 1000.0;
  while (true) {
    std::size_t k = 0;
    while (clipped_shift_sum(z, lo + static_cast<double>(k) * step) > budget) ++k;
    hi = lo + static_cast<double>(k) * step;
    if (step < resolution) return hi;
    lo = k == 0 ? hi : hi - step;
    step /= 1000.0;
  }
}

}  // namespace ariel::testing
