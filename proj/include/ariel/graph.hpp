#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ariel/matrix.hpp"
#include "ariel/rng.hpp"

namespace ariel {

/// Unordered node pair, always stored with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bijection between unordered pairs {i<j} of n nodes and 0..n(n-1)/2-1,
/// row-major over the strict upper triangle.
class PairIndex {
 public:
  explicit PairIndex(std::size_t n) : n_(n) {}

  std::size_t nodes() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ < 2 ? 0 : n_ * (n_ - 1) / 2; }
  std::size_t index(std::size_t i, std::size_t j) const noexcept;
  Edge pair(std::size_t k) const noexcept;

 private:
  std::size_t n_;
};

/// Undirected graph G = {A, X}. Immutable once constructed.
///
/// The adjacency is symmetric with a zero diagonal and entries in [0,1];
/// a binary graph holds only 0/1. Labels are either empty or one per node
/// with -1 marking unlabeled nodes.
class Graph {
 public:
  Graph() = default;
  /// Validates every invariant; throws ContractViolation on failure.
  Graph(Matrix adjacency, Matrix features, std::vector<int> labels = {});

  static Graph from_edges(std::size_t n, const std::vector<Edge>& edges, Matrix features,
                          std::vector<int> labels = {});

  std::size_t num_nodes() const noexcept { return adjacency_.rows(); }
  std::size_t feature_dim() const noexcept { return features_.cols(); }
  const Matrix& adjacency() const noexcept { return adjacency_; }
  const Matrix& features() const noexcept { return features_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty(); }

  bool is_binary() const;
  /// Unordered pairs with nonzero weight.
  std::size_t edge_count() const;
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Matrix adjacency_;
  Matrix features_;
  std::vector<int> labels_;
};

/// An augmented copy of a source graph together with what was removed.
struct GraphView {
  Graph graph;
  std::vector<Edge> dropped_edges;
  std::vector<std::size_t> masked_dims;
};

/// Rebuilds a view from its source and its recorded drops and masks.
Graph apply_view_record(const Graph& source, const std::vector<Edge>& dropped_edges,
                        const std::vector<std::size_t>& masked_dims);

struct SubgraphHandle {
  Graph graph;
  /// Subgraph index -> original node index.
  std::vector<std::size_t> node_map;
};

/// Â = D̃^{-1/2}(A + I)D̃^{-1/2} with D̃ the row sums of A + I.
/// Optionally reports the diagonal of D̃^{-1/2}.
Matrix normalize_adjacency(const Matrix& adjacency, std::vector<double>* inv_sqrt_degree = nullptr);

/// C with +1 where an edge could be added, -1 where one exists, 0 on the diagonal.
Matrix complement_mask(const Matrix& adjacency);

/// Drops each edge with probability p_edge and zeroes each feature column
/// with probability p_feat.
GraphView augment(const Graph& graph, double p_edge, double p_feat, RngStream& rng);

/// Uniform m-node sample without replacement with all induced edges.
SubgraphHandle sample_subgraph(const Graph& graph, std::size_t m, RngStream& rng);
Graph induced_subgraph(const Graph& graph, const std::vector<std::size_t>& node_map);

/// Calls visit(t, view) for t = 0..steps where view t is G_t, built from
/// G_{t-1} by dropping each surviving edge and masking each unmasked
/// feature column with probability p. Drops and masks in the view are
/// cumulative relative to G_0. Only one dense graph is alive at a time.
void for_each_degradation(const Graph& graph, double p, std::size_t steps, RngStream& rng,
                          const std::function<void(std::size_t, const GraphView&)>& visit);

/// Materialized form of for_each_degradation; steps + 1 views.
std::vector<GraphView> degrade_sequence(const Graph& graph, double p, std::size_t steps, RngStream& rng);

struct SbmSpec {
  std::vector<std::size_t> block_sizes;
  double p_in = 0.0;
  double p_out = 0.0;
  std::size_t feature_dim = 0;
  /// Standard deviation of the per-block feature means.
  double mean_scale = 1.0;
  /// Standard deviation of the per-node noise around the block mean.
  double noise_scale = 1.0;
};

/// Stochastic block model with labels = block ids and Gaussian features
/// around per-block means.
Graph generate_sbm(const SbmSpec& spec, RngStream& rng);

}  // namespace ariel
