#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ariel/error.hpp"
#include "ariel/graph.hpp"
#include "support.hpp"

using namespace ariel;
using ariel::testing::random_graph;

namespace {

Graph path_graph(std::size_t n, std::size_t d = 2) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph::from_edges(n, edges, Matrix(n, d, 1.0));
}

Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    edges.push_back({std::min(i, j), std::max(i, j)});
  }
  return Graph::from_edges(n, edges, Matrix(n, 1, 1.0));
}

std::size_t unmasked_dims(const Graph& g) {
  std::size_t live = 0;
  for (std::size_t k = 0; k < g.feature_dim(); ++k) {
    bool any = false;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) any = any || g.features()(i, k) != 0.0;
    live += any;
  }
  return live;
}

}  // namespace

TEST(PairIndex, RoundTrip) {
  for (std::size_t n : {2u, 3u, 7u, 20u}) {
    const PairIndex idx(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        EXPECT_EQ(idx.index(i, j), k);
        EXPECT_EQ(idx.pair(k), (Edge{i, j}));
      }
    EXPECT_EQ(idx.size(), k);
  }
}

TEST(Graph, ValidatesInvariants) {
  EXPECT_THROW(Graph(Matrix{{0, 1}, {0, 0}}, Matrix(2, 1)), ContractViolation);
  EXPECT_THROW(Graph(Matrix{{1, 0}, {0, 0}}, Matrix(2, 1)), ContractViolation);
  EXPECT_THROW(Graph(Matrix{{0, 2}, {2, 0}}, Matrix(2, 1)), ContractViolation);
  EXPECT_THROW(Graph(Matrix{{0, 1}, {1, 0}}, Matrix(3, 1)), ContractViolation);
  EXPECT_THROW(Graph(Matrix{{0, 1}, {1, 0}}, Matrix{{1.0}, {NAN}}), ContractViolation);
  EXPECT_THROW(Graph(Matrix{{0, 1}, {1, 0}}, Matrix(2, 1), {0, -2}), ContractViolation);
  const Graph relaxed(Matrix{{0, 0.5}, {0.5, 0}}, Matrix(2, 1));
  EXPECT_FALSE(relaxed.is_binary());
}

TEST(NormalizeAdjacency, Examples) {
  EXPECT_EQ(normalize_adjacency(Matrix{{0.0}}), (Matrix{{1.0}}));
  EXPECT_EQ(normalize_adjacency(Matrix{{0, 1}, {1, 0}}), (Matrix{{0.5, 0.5}, {0.5, 0.5}}));
}

TEST(NormalizeAdjacency, RegularGraph) {
  for (std::size_t n : {5u, 8u, 13u}) {
    const Matrix a_hat = normalize_adjacency(cycle_graph(n).adjacency());
    const Matrix a = cycle_graph(n).adjacency();
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(a_hat(i, j), (i == j || a(i, j) != 0.0) ? 1.0 / 3.0 : 0.0);
        row += a_hat(i, j);
      }
      EXPECT_NEAR(row, 1.0, 1e-14);
    }
  }
}

TEST(NormalizeAdjacency, SymmetricOnRandomWeightedInputs) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RngStream rng(seed);
    const std::size_t n = 2 + rng.below(15);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = rng.bernoulli(0.4) ? rng.uniform() : 0.0;
    const Matrix a_hat = normalize_adjacency(a);
    EXPECT_EQ(a_hat, a_hat.transposed());
  }
}

TEST(NormalizeAdjacency, RejectsBadInput) {
  EXPECT_THROW(normalize_adjacency(Matrix{{0, 1}, {0, 0}}), ContractViolation);
  EXPECT_THROW(normalize_adjacency(Matrix{{0, -1}, {-1, 0}}), ContractViolation);
}

TEST(ComplementMask, Examples) {
  EXPECT_EQ(complement_mask(Matrix(2, 2)), (Matrix{{0, 1}, {1, 0}}));
  Matrix complete(4, 4, 1.0);
  for (std::size_t i = 0; i < 4; ++i) complete(i, i) = 0.0;
  EXPECT_EQ(complement_mask(complete), complete * -1.0);
  EXPECT_THROW(complement_mask(Matrix{{0, 0.5}, {0.5, 0}}), ContractViolation);
}

TEST(ComplementMask, FullFlipProperty) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RngStream rng(seed);
    const Graph g = random_graph(2 + rng.below(12), 1, 0.4, rng);
    const Matrix c = complement_mask(g.adjacency());
    const Matrix flipped = g.adjacency() + c;
    const Matrix c2 = complement_mask(flipped);
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
      for (std::size_t j = 0; j < g.num_nodes(); ++j) {
        if (i == j) continue;
        EXPECT_EQ(flipped(i, j), 1.0 - g.adjacency()(i, j));
        EXPECT_EQ(c2(i, j), -c(i, j));
      }
  }
}

TEST(Augment, NoOpAndFullRemoval) {
  RngStream rng(0);
  const Graph g = random_graph(12, 5, 0.4, rng);
  const GraphView same = augment(g, 0.0, 0.0, rng);
  EXPECT_EQ(same.graph, g);
  EXPECT_TRUE(same.dropped_edges.empty());
  const GraphView gone = augment(g, 1.0, 1.0, rng);
  EXPECT_EQ(gone.graph.edge_count(), 0u);
  EXPECT_EQ(gone.graph.features(), Matrix(12, 5));
  EXPECT_EQ(gone.dropped_edges.size(), g.edge_count());
  EXPECT_EQ(gone.masked_dims.size(), 5u);
  EXPECT_THROW(augment(g, 1.2, 0.0, rng), DomainError);
}

TEST(Augment, MeanSurvivingEdges) {
  // 100 edges: a 101-node path.
  const Graph g = path_graph(101);
  ASSERT_EQ(g.edge_count(), 100u);
  RngStream rng(5);
  double total = 0.0;
  for (int i = 0; i < 10000; ++i) total += static_cast<double>(augment(g, 0.3, 0.0, rng).graph.edge_count());
  const double mean = total / 10000;
  EXPECT_GE(mean, 69.0);
  EXPECT_LE(mean, 71.0);
}

TEST(Augment, NeverAddsAndRecordReproduces) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RngStream rng(seed);
    const Graph g = random_graph(3 + rng.below(15), 1 + rng.below(6), 0.3, rng);
    const GraphView v = augment(g, rng.uniform(), rng.uniform(), rng);
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
      for (std::size_t j = 0; j < g.num_nodes(); ++j) EXPECT_LE(v.graph.adjacency()(i, j), g.adjacency()(i, j));
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
      for (std::size_t k = 0; k < g.feature_dim(); ++k)
        if (v.graph.features()(i, k) != 0.0) {
          EXPECT_EQ(v.graph.features()(i, k), g.features()(i, k));
        }
    EXPECT_EQ(apply_view_record(g, v.dropped_edges, v.masked_dims), v.graph);
  }
}

TEST(SampleSubgraph, FullAndSingleton) {
  RngStream rng(1);
  const Graph g = random_graph(9, 3, 0.5, rng);
  const SubgraphHandle full = sample_subgraph(g, 9, rng);
  EXPECT_EQ(full.graph, g);  // node_map is sorted, so m = n is the identity
  const SubgraphHandle one = sample_subgraph(g, 1, rng);
  EXPECT_EQ(one.graph.num_nodes(), 1u);
  EXPECT_EQ(one.graph.adjacency(), Matrix(1, 1));
  EXPECT_THROW(sample_subgraph(g, 0, rng), DomainError);
  EXPECT_THROW(sample_subgraph(g, 10, rng), DomainError);
}

TEST(SampleSubgraph, TrianglePairsHaveOneEdge) {
  const Graph tri = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}}, Matrix(3, 1));
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RngStream rng(seed);
    const SubgraphHandle s = sample_subgraph(tri, 2, rng);
    EXPECT_EQ(s.graph.edge_count(), 1u);
    seen.insert(s.node_map);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(SampleSubgraph, PreservesEdgesFeaturesLabels) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RngStream rng(seed);
    const Graph g = random_graph(4 + rng.below(20), 3, 0.3, rng, 4);
    const std::size_t m = 1 + rng.below(g.num_nodes());
    const SubgraphHandle s = sample_subgraph(g, m, rng);
    ASSERT_EQ(s.node_map.size(), m);
    EXPECT_EQ(std::set<std::size_t>(s.node_map.begin(), s.node_map.end()).size(), m);
    for (std::size_t a = 0; a < m; ++a) {
      ASSERT_LT(s.node_map[a], g.num_nodes());
      EXPECT_EQ(s.graph.labels()[a], g.labels()[s.node_map[a]]);
      for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(s.graph.features()(a, k), g.features()(s.node_map[a], k));
      for (std::size_t b = 0; b < m; ++b)
        EXPECT_EQ(s.graph.adjacency()(a, b), g.adjacency()(s.node_map[a], s.node_map[b]));
    }
  }
}

TEST(Degrade, MonotoneAndCumulative) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(seed);
    const Graph g = random_graph(30, 8, 0.2, rng);
    const auto views = degrade_sequence(g, 0.1, 15, rng);
    ASSERT_EQ(views.size(), 16u);
    EXPECT_EQ(views[0].graph, g);
    for (std::size_t t = 1; t < views.size(); ++t) {
      EXPECT_LE(views[t].graph.edge_count(), views[t - 1].graph.edge_count());
      EXPECT_LE(unmasked_dims(views[t].graph), unmasked_dims(views[t - 1].graph));
      EXPECT_GE(views[t].masked_dims.size(), views[t - 1].masked_dims.size());
      EXPECT_EQ(apply_view_record(g, views[t].dropped_edges, views[t].masked_dims), views[t].graph);
      const std::set<std::size_t> now(views[t].masked_dims.begin(), views[t].masked_dims.end());
      for (std::size_t k : views[t - 1].masked_dims) EXPECT_TRUE(now.count(k));
    }
  }
}

TEST(Degrade, TinyProbabilityKeepsGraph) {
  RngStream rng(4);
  const Graph g = random_graph(10, 3, 0.4, rng);
  const auto views = degrade_sequence(g, 1e-12, 5, rng);
  for (const auto& v : views) EXPECT_EQ(v.graph, g);
  EXPECT_THROW(degrade_sequence(g, 0.0, 5, rng), DomainError);
  EXPECT_THROW(degrade_sequence(g, 0.5, 0, rng), DomainError);
}

TEST(Degrade, SurvivalMatchesGeometricRate) {
  // 1,000-edge fixture; per-realization survival against 0.97^t with a
  // 4-sigma binomial band.
  const Graph g = path_graph(1001, 1);
  RngStream rng(17);
  for_each_degradation(g, 0.03, 60, rng, [&](std::size_t t, const GraphView& v) {
    const double q = std::pow(0.97, static_cast<double>(t));
    const double frac = static_cast<double>(v.graph.edge_count()) / 1000.0;
    EXPECT_NEAR(frac, q, 4.0 * std::sqrt(q * (1 - q) / 1000.0) + 1e-12) << "t=" << t;
  });
}

TEST(Sbm, DeterministicTriangles) {
  RngStream rng(0);
  const Graph g = generate_sbm({{3, 3}, 1.0, 0.0, 2}, rng);
  EXPECT_EQ(g.edge_count(), 6u);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      EXPECT_EQ(g.adjacency()(i, j), (i != j && i / 3 == j / 3) ? 1.0 : 0.0);
  EXPECT_EQ(g.labels(), (std::vector<int>{0, 0, 0, 1, 1, 1}));
}

TEST(Sbm, ExpectedDegrees) {
  double within = 0.0, cross = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream rng(seed);
    const Graph g = generate_sbm({{50, 50}, 0.2, 0.02, 1}, rng);
    for (std::size_t i = 0; i < 100; ++i)
      for (std::size_t j = 0; j < 100; ++j)
        (i / 50 == j / 50 ? within : cross) += g.adjacency()(i, j);
  }
  within /= 100.0 * 100.0;
  cross /= 100.0 * 100.0;
  EXPECT_NEAR(within, 9.8, 9.8 * 0.15);
  EXPECT_NEAR(cross, 1.0, 1.0 * 0.15);
}

TEST(Sbm, UniformDensityWhenProbabilitiesMatch) {
  double within = 0.0, cross = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    const Graph g = generate_sbm({{20, 20}, 0.1, 0.1, 1}, rng);
    for (std::size_t i = 0; i < 40; ++i)
      for (std::size_t j = 0; j < 40; ++j)
        if (i != j) (i / 20 == j / 20 ? within : cross) += g.adjacency()(i, j);
  }
  EXPECT_NEAR(within / (50.0 * 2 * 20 * 19), 0.1, 0.01);
  EXPECT_NEAR(cross / (50.0 * 2 * 20 * 20), 0.1, 0.01);
}
