#include "ariel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ariel/error.hpp"

namespace ariel {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
  }
}

void check_adjacency(const Matrix& a, bool require_binary, const char* op) {
  if (a.rows() != a.cols()) throw ContractViolation(std::string(op) + ": adjacency is not square");
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) throw ContractViolation(std::string(op) + ": nonzero diagonal at node " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = a(i, j);
      if (w != a(j, i)) {
        throw ContractViolation(std::string(op) + ": adjacency is not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      }
      if (!(w >= 0.0 && w <= 1.0)) {
        throw ContractViolation(std::string(op) + ": adjacency entry outside [0,1] at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      }
      if (require_binary && w != 0.0 && w != 1.0) {
        throw ContractViolation(std::string(op) + ": adjacency is not binary");
      }
    }
  }
}

Matrix mask_columns(const Matrix& features, const std::vector<std::size_t>& dims) {
  Matrix out = features;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t c : dims) out(i, c) = 0.0;
  return out;
}

}  // namespace

std::size_t PairIndex::index(std::size_t i, std::size_t j) const noexcept {
  if (i > j) std::swap(i, j);
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

Edge PairIndex::pair(std::size_t k) const noexcept {
  // Row i starts at offset(i) = i*n - i(i+1)/2. Estimate i in closed form, then correct.
  const double nn = static_cast<double>(n_);
  const double disc = (2.0 * nn - 1.0) * (2.0 * nn - 1.0) - 8.0 * static_cast<double>(k);
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor(((2.0 * nn - 1.0) - std::sqrt(std::max(disc, 0.0))) / 2.0)));
  auto offset = [this](std::size_t r) { return r * n_ - r * (r + 1) / 2; };
  while (i > 0 && offset(i) > k) --i;
  while (i + 1 < n_ && offset(i + 1) <= k) ++i;
  return Edge{i, i + 1 + (k - offset(i))};
}

Graph::Graph(Matrix adjacency, Matrix features, std::vector<int> labels)
    : adjacency_(std::move(adjacency)), features_(std::move(features)), labels_(std::move(labels)) {
  check_adjacency(adjacency_, false, "Graph");
  if (features_.rows() != adjacency_.rows()) {
    throw ContractViolation("Graph: feature rows (" + std::to_string(features_.rows()) + ") differ from node count (" +
                            std::to_string(adjacency_.rows()) + ")");
  }
  if (!all_finite(features_)) throw ContractViolation("Graph: non-finite feature entry");
  if (!labels_.empty() && labels_.size() != adjacency_.rows()) {
    throw ContractViolation("Graph: label count differs from node count");
  }
  for (int y : labels_)
    if (y < -1) throw ContractViolation("Graph: labels must be >= -1");
}

Graph Graph::from_edges(std::size_t n, const std::vector<Edge>& edges, Matrix features, std::vector<int> labels) {
  Matrix a(n, n);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw ContractViolation("Graph::from_edges: node index out of range");
    if (e.u == e.v) continue;
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return Graph(std::move(a), std::move(features), std::move(labels));
}

bool Graph::is_binary() const {
  return std::all_of(adjacency_.values().begin(), adjacency_.values().end(),
                     [](double w) { return w == 0.0 || w == 1.0; });
}

std::size_t Graph::edge_count() const {
  std::size_t count = 0;
  const std::size_t n = num_nodes();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (adjacency_(i, j) != 0.0) ++count;
  return count;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  const std::size_t n = num_nodes();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (adjacency_(i, j) != 0.0) out.push_back({i, j});
  return out;
}

Graph apply_view_record(const Graph& source, const std::vector<Edge>& dropped_edges,
                        const std::vector<std::size_t>& masked_dims) {
  Matrix a = source.adjacency();
  for (const Edge& e : dropped_edges) {
    a(e.u, e.v) = 0.0;
    a(e.v, e.u) = 0.0;
  }
  return Graph(std::move(a), mask_columns(source.features(), masked_dims), source.labels());
}

Matrix normalize_adjacency(const Matrix& adjacency, std::vector<double>* inv_sqrt_degree_out) {
  check_adjacency(adjacency, false, "normalize_adjacency");
  const std::size_t n = adjacency.rows();
  std::vector<double> degree(n, 1.0), inv_sqrt_degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double w : adjacency.row(i)) degree[i] += w;
    inv_sqrt_degree[i] = 1.0 / std::sqrt(degree[i]);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = i == j ? 1.0 : adjacency(i, j);
      if (w != 0.0) out(i, j) = w / std::sqrt(degree[i] * degree[j]);
    }
  }
  if (inv_sqrt_degree_out) *inv_sqrt_degree_out = std::move(inv_sqrt_degree);
  return out;
}

Matrix complement_mask(const Matrix& adjacency) {
  check_adjacency(adjacency, true, "complement_mask");
  const std::size_t n = adjacency.rows();
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) c(i, j) = adjacency(i, j) == 1.0 ? -1.0 : 1.0;
  return c;
}

GraphView augment(const Graph& graph, double p_edge, double p_feat, RngStream& rng) {
  check_probability(p_edge, "augment: p_edge");
  check_probability(p_feat, "augment: p_feat");
  if (!graph.is_binary()) throw ContractViolation("augment: graph must be binary");
  GraphView view;
  for (const Edge& e : graph.edges())
    if (rng.bernoulli(p_edge)) view.dropped_edges.push_back(e);
  for (std::size_t c = 0; c < graph.feature_dim(); ++c)
    if (rng.bernoulli(p_feat)) view.masked_dims.push_back(c);
  view.graph = apply_view_record(graph, view.dropped_edges, view.masked_dims);
  return view;
}

Graph induced_subgraph(const Graph& graph, const std::vector<std::size_t>& node_map) {
  const std::size_t m = node_map.size();
  const std::size_t d = graph.feature_dim();
  Matrix a(m, m);
  Matrix x(m, d);
  std::vector<int> labels;
  if (graph.has_labels()) labels.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t src = node_map[r];
    if (src >= graph.num_nodes()) throw ContractViolation("induced_subgraph: node index out of range");
    for (std::size_t c = 0; c < m; ++c) a(r, c) = graph.adjacency()(src, node_map[c]);
    std::copy_n(graph.features().row(src).begin(), d, x.row(r).begin());
    if (graph.has_labels()) labels[r] = graph.labels()[src];
  }
  return Graph(std::move(a), std::move(x), std::move(labels));
}

SubgraphHandle sample_subgraph(const Graph& graph, std::size_t m, RngStream& rng) {
  const std::size_t n = graph.num_nodes();
  if (m < 1 || m > n) {
    throw DomainError("sample_subgraph: size " + std::to_string(m) + " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> nodes(n);
  std::iota(nodes.begin(), nodes.end(), std::size_t{0});
  // Partial Fisher–Yates: the first m slots become a uniform sample.
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(nodes[i], nodes[j]);
  }
  nodes.resize(m);
  std::sort(nodes.begin(), nodes.end());
  SubgraphHandle handle;
  handle.graph = induced_subgraph(graph, nodes);
  handle.node_map = std::move(nodes);
  return handle;
}

void for_each_degradation(const Graph& graph, double p, std::size_t steps, RngStream& rng,
                          const std::function<void(std::size_t, const GraphView&)>& visit) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("degrade_sequence: p must lie in (0,1)");
  if (steps < 1) throw DomainError("degrade_sequence: steps must be >= 1");

  std::vector<Edge> surviving = graph.edges();
  std::vector<std::size_t> unmasked(graph.feature_dim());
  std::iota(unmasked.begin(), unmasked.end(), std::size_t{0});

  GraphView view{graph, {}, {}};
  visit(0, view);
  for (std::size_t t = 1; t <= steps; ++t) {
    std::vector<Edge> kept;
    kept.reserve(surviving.size());
    for (const Edge& e : surviving) {
      if (rng.bernoulli(p)) view.dropped_edges.push_back(e);
      else kept.push_back(e);
    }
    surviving = std::move(kept);
    std::vector<std::size_t> still;
    still.reserve(unmasked.size());
    for (std::size_t c : unmasked) {
      if (rng.bernoulli(p)) view.masked_dims.push_back(c);
      else still.push_back(c);
    }
    unmasked = std::move(still);
    view.graph = apply_view_record(graph, view.dropped_edges, view.masked_dims);
    visit(t, view);
  }
}

std::vector<GraphView> degrade_sequence(const Graph& graph, double p, std::size_t steps, RngStream& rng) {
  std::vector<GraphView> out;
  out.reserve(steps + 1);
  for_each_degradation(graph, p, steps, rng, [&](std::size_t, const GraphView& v) { out.push_back(v); });
  return out;
}

Graph generate_sbm(const SbmSpec& spec, RngStream& rng) {
  check_probability(spec.p_in, "generate_sbm: p_in");
  check_probability(spec.p_out, "generate_sbm: p_out");
  if (spec.block_sizes.empty()) throw DomainError("generate_sbm: no blocks");
  std::vector<int> labels;
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    if (spec.block_sizes[b] == 0) throw DomainError("generate_sbm: block sizes must be positive");
    labels.insert(labels.end(), spec.block_sizes[b], static_cast<int>(b));
  }
  const std::size_t n = labels.size();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? spec.p_in : spec.p_out;
      if (rng.bernoulli(p)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  const std::size_t d = spec.feature_dim;
  Matrix means(spec.block_sizes.size(), d);
  for (double& v : means.values()) v = spec.mean_scale * rng.gaussian();
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c)
      x(i, c) = means(static_cast<std::size_t>(labels[i]), c) + spec.noise_scale * rng.gaussian();
  return Graph(std::move(a), std::move(x), std::move(labels));
}

}  // namespace ariel
