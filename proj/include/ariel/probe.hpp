#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ariel/matrix.hpp"
#include "ariel/rng.hpp"

namespace ariel {

/// Disjoint train/val/test index sets over the labeled nodes.
struct SplitMasks {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Uniform 10/10/80 split of labeled nodes (label ≥ 0); sizes are
/// round(0.1·n_labeled) for train and val, the rest test.
SplitMasks make_split(std::span<const int> labels, RngStream& rng);

struct ProbeOptions {
  double lambda = 1e-4;
  std::size_t max_iterations = 2000;
  double tolerance = 1e-5;
};

/// Multinomial logistic regression on standardized embeddings.
struct ProbeModel {
  Matrix weights;  // d × classes
  Matrix bias;     // 1 × classes
  std::vector<double> mean;
  std::vector<double> scale;
  double lambda = 0.0;
  /// Set when training saw a single class; predict() then returns it everywhere.
  bool degenerate = false;
  /// Objective after each accepted step (first entry: initial objective).
  std::vector<double> objective_history;

  std::size_t num_classes() const noexcept { return weights.cols(); }
  Matrix logits(const Matrix& embeddings) const;
  /// Argmax with ties going to the lowest class index.
  std::vector<int> predict(const Matrix& embeddings) const;
};

/// Minimizes mean cross-entropy + λ‖W‖² by proximal gradient descent with
/// backtracking (the L2 term is handled in closed form), until the gradient
/// mapping norm drops below the tolerance or the iteration cap is hit.
/// Standardization statistics come from the training rows only.
ProbeModel fit_probe(const Matrix& train_embeddings, std::span<const int> train_labels, const ProbeOptions& options = {});

double accuracy(std::span<const int> predictions, std::span<const int> labels);
double accuracy(const ProbeModel& model, const Matrix& embeddings, std::span<const int> labels);

Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows);
std::vector<int> select(std::span<const int> values, std::span<const std::size_t> rows);

}  // namespace ariel
