#include "ariel/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ariel/error.hpp"

namespace ariel {
namespace {

struct Objective {
  double value = 0.0;
  Matrix grad_w;
  Matrix grad_b;
};

// Mean cross-entropy only; the L2 term is applied by the proximal step.
Objective cross_entropy(const Matrix& x, std::span<const int> y, const Matrix& w, const Matrix& b, bool with_grad) {
  const std::size_t n = x.rows();
  const std::size_t k = w.cols();
  Matrix logits = matmul(x, w);
  Objective obj;
  Matrix residual(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = logits.row(i);
    double m = -INFINITY;
    for (std::size_t c = 0; c < k; ++c) {
      row[c] += b(0, c);
      m = std::max(m, row[c]);
    }
    double z = 0.0;
    for (std::size_t c = 0; c < k; ++c) z += std::exp(row[c] - m);
    const double lse = m + std::log(z);
    const auto yi = static_cast<std::size_t>(y[i]);
    obj.value += lse - row[yi];
    if (with_grad) {
      for (std::size_t c = 0; c < k; ++c) residual(i, c) = std::exp(row[c] - lse);
      residual(i, yi) -= 1.0;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  obj.value *= inv_n;
  if (with_grad) {
    obj.grad_w = matmul_tn(x, residual) * inv_n;
    obj.grad_b = column_sums(residual) * inv_n;
  }
  return obj;
}

double squared_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return s;
}

Matrix standardize(const Matrix& x, const std::vector<double>& mean, const std::vector<double>& scale) {
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = (x(i, j) - mean[j]) / scale[j];
  return out;
}

}  // namespace

SplitMasks make_split(std::span<const int> labels, RngStream& rng) {
  std::vector<std::size_t> labeled;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0) labeled.push_back(i);
  if (labeled.size() < 10) throw DomainError("make_split: need at least 10 labeled nodes, got " + std::to_string(labeled.size()));
  rng.shuffle(std::span<std::size_t>(labeled));
  const auto tenth = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(labeled.size())));
  SplitMasks s;
  s.train.assign(labeled.begin(), labeled.begin() + tenth);
  s.val.assign(labeled.begin() + tenth, labeled.begin() + 2 * tenth);
  s.test.assign(labeled.begin() + 2 * tenth, labeled.end());
  for (auto* part : {&s.train, &s.val, &s.test}) std::sort(part->begin(), part->end());
  return s;
}

Matrix ProbeModel::logits(const Matrix& embeddings) const {
  if (embeddings.cols() != mean.size()) throw ContractViolation("ProbeModel: embedding width mismatch");
  Matrix out = matmul(standardize(embeddings, mean, scale), weights);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t c = 0; c < out.cols(); ++c) out(i, c) += bias(0, c);
  return out;
}

std::vector<int> ProbeModel::predict(const Matrix& embeddings) const {
  const Matrix l = logits(embeddings);
  std::vector<int> out(l.rows());
  for (std::size_t i = 0; i < l.rows(); ++i) {
    const auto row = l.row(i);
    out[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

ProbeModel fit_probe(const Matrix& x_raw, std::span<const int> y, const ProbeOptions& options) {
  if (x_raw.rows() != y.size() || y.empty()) throw ContractViolation("fit_probe: need one label per embedding row");
  if (!(options.lambda >= 0.0)) throw DomainError("fit_probe: lambda must be >= 0");
  for (int label : y)
    if (label < 0) throw ContractViolation("fit_probe: training labels must be >= 0");

  const std::size_t n = x_raw.rows();
  const std::size_t d = x_raw.cols();
  const auto classes = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;

  ProbeModel model;
  model.lambda = options.lambda;
  model.mean.assign(d, 0.0);
  model.scale.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += x_raw(i, j);
    m /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (x_raw(i, j) - m) * (x_raw(i, j) - m);
    var /= static_cast<double>(n);
    model.mean[j] = m;
    model.scale[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  model.weights = Matrix(d, classes);
  model.bias = Matrix(1, classes);

  if (std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; })) {
    model.degenerate = true;
    model.bias(0, static_cast<std::size_t>(y[0])) = 1.0;
    return model;
  }

  const Matrix x = standardize(x_raw, model.mean, model.scale);
  const double lambda = options.lambda;
  auto full_objective = [&](double ce, const Matrix& w) { return ce + lambda * squared_norm(w); };

  Objective cur = cross_entropy(x, y, model.weights, model.bias, true);
  model.objective_history.push_back(full_objective(cur.value, model.weights));
  double step = 1.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    // Proximal step for λ‖W‖²: W⁺ = (W − η∇W) / (1 + 2ηλ); bias unregularized.
    Matrix w_next, b_next;
    Objective next;
    double mapping_norm_sq = 0.0;
    for (int attempt = 0; attempt < 60; ++attempt) {
      w_next = (model.weights - cur.grad_w * step) * (1.0 / (1.0 + 2.0 * step * lambda));
      b_next = model.bias - cur.grad_b * step;
      const Matrix dw = w_next - model.weights;
      const Matrix db = b_next - model.bias;
      next = cross_entropy(x, y, w_next, b_next, false);
      double linear = 0.0;
      for (std::size_t k = 0; k < dw.size(); ++k) linear += cur.grad_w.data()[k] * dw.data()[k];
      for (std::size_t k = 0; k < db.size(); ++k) linear += cur.grad_b.data()[k] * db.data()[k];
      mapping_norm_sq = squared_norm(dw) + squared_norm(db);
      // Sufficient decrease on the smooth part (standard backtracking bound).
      if (next.value <= cur.value + linear + mapping_norm_sq / (2.0 * step) + 1e-15) break;
      step *= 0.5;
    }
    const double grad_mapping = std::sqrt(mapping_norm_sq) / step;
    const double f_next = full_objective(next.value, w_next);
    if (f_next > model.objective_history.back()) break;  // no further progress
    model.weights = std::move(w_next);
    model.bias = std::move(b_next);
    cur = cross_entropy(x, y, model.weights, model.bias, true);
    model.objective_history.push_back(f_next);
    if (grad_mapping < options.tolerance) break;
    step *= 2.0;
  }
  return model;
}

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw ContractViolation("accuracy: length mismatch");
  if (labels.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (predictions[i] == labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double accuracy(const ProbeModel& model, const Matrix& embeddings, std::span<const int> labels) {
  return accuracy(model.predict(embeddings), labels);
}

Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy_n(m.row(rows[r]).begin(), m.cols(), out.row(r).begin());
  return out;
}

std::vector<int> select(std::span<const int> values, std::span<const std::size_t> rows) {
  std::vector<int> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out[r] = values[rows[r]];
  return out;
}

}  // namespace ariel
