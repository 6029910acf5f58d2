#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "ariel/error.hpp"
#include "ariel/eval.hpp"
#include "ariel/probe.hpp"
#include "support.hpp"

using namespace ariel;
using namespace ariel::testing;

namespace {

std::vector<int> cyclic_labels(std::size_t n, int classes) {
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % static_cast<std::size_t>(classes));
  return y;
}

double frob(const Matrix& m) { return frobenius_norm(m); }

}  // namespace

TEST(MakeSplit, HundredLabeledNodes) {
  RngStream rng(0);
  const SplitMasks s = make_split(cyclic_labels(100, 3), rng);
  EXPECT_EQ(s.train.size(), 10u);
  EXPECT_EQ(s.val.size(), 10u);
  EXPECT_EQ(s.test.size(), 80u);
}

TEST(MakeSplit, DeterministicUnderSeed) {
  const auto y = cyclic_labels(57, 4);
  RngStream a(5), b(5), c(6);
  const SplitMasks sa = make_split(y, a), sb = make_split(y, b), sc = make_split(y, c);
  EXPECT_EQ(sa.train, sb.train);
  EXPECT_EQ(sa.test, sb.test);
  EXPECT_NE(sa.train, sc.train);
}

TEST(MakeSplit, DisjointAndExhaustiveOverLabeledNodes) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream rng(seed);
    const std::size_t n = 10 + rng.below(200);
    std::vector<int> y(n);
    std::size_t labeled = 0;
    for (auto& v : y) {
      v = rng.bernoulli(0.2) ? -1 : static_cast<int>(rng.below(5));
      labeled += v >= 0;
    }
    if (labeled < 10) continue;
    const SplitMasks s = make_split(y, rng);
    std::set<std::size_t> all;
    for (const auto* part : {&s.train, &s.val, &s.test})
      for (std::size_t i : *part) {
        EXPECT_TRUE(all.insert(i).second) << "index " << i << " in two masks";
        EXPECT_GE(y[i], 0);
      }
    EXPECT_EQ(all.size(), labeled);
    const auto tenth = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(labeled)));
    EXPECT_EQ(s.train.size(), tenth);
    EXPECT_EQ(s.val.size(), tenth);
  }
}

TEST(MakeSplit, TooFewLabeledNodes) {
  std::vector<int> y(30, -1);
  for (int i = 0; i < 9; ++i) y[i] = 0;
  RngStream rng(0);
  EXPECT_THROW(make_split(y, rng), DomainError);
}

TEST(Probe, SeparableToySetIsFit) {
  // Two well-separated clusters in 2-D.
  RngStream rng(1);
  Matrix x(40, 2);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    y[i] = static_cast<int>(i % 2);
    x(i, 0) = (y[i] ? 2.0 : -2.0) + 0.3 * rng.gaussian();
    x(i, 1) = 0.3 * rng.gaussian();
  }
  const ProbeModel m = fit_probe(x, y, {1e-4, 2000, 1e-5});
  EXPECT_EQ(accuracy(m, x, y), 1.0);
  EXPECT_FALSE(m.degenerate);
  EXPECT_TRUE(all_finite(m.weights));
}

TEST(Probe, SingleClassIsDegenerate) {
  RngStream rng(2);
  const Matrix x = random_matrix(12, 3, rng);
  const std::vector<int> y(12, 4);
  const ProbeModel m = fit_probe(x, y);
  EXPECT_TRUE(m.degenerate);
  for (int p : m.predict(random_matrix(7, 3, rng))) EXPECT_EQ(p, 4);
}

TEST(Probe, HugeLambdaShrinksToPrior) {
  RngStream rng(3);
  const Matrix x = random_matrix(30, 4, rng);
  std::vector<int> y(30, 0);
  for (std::size_t i = 0; i < 30; ++i) y[i] = i < 18 ? 1 : (i < 25 ? 0 : 2);
  const ProbeModel m = fit_probe(x, y, {1e6, 2000, 1e-5});
  EXPECT_LT(frob(m.weights), 1e-2);
  for (int p : m.predict(random_matrix(20, 4, rng))) EXPECT_EQ(p, 1);
}

TEST(Probe, ObjectiveMonotoneOverAcceptedSteps) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed);
    const std::size_t n = 20 + rng.below(40), d = 2 + rng.below(6);
    const Matrix x = random_matrix(n, d, rng);
    std::vector<int> y(n);
    for (auto& v : y) v = static_cast<int>(rng.below(3));
    y[0] = 0;
    y[1] = 1;
    const ProbeModel m = fit_probe(x, y, {1e-3, 300, 1e-6});
    ASSERT_GE(m.objective_history.size(), 2u);
    for (std::size_t k = 1; k < m.objective_history.size(); ++k)
      EXPECT_LE(m.objective_history[k], m.objective_history[k - 1]) << "seed " << seed << " step " << k;
  }
}

TEST(Probe, StandardizationUsesTrainStatistics) {
  RngStream rng(4);
  Matrix x = random_matrix(20, 2, rng);
  for (std::size_t i = 0; i < 20; ++i) x(i, 1) = 100.0 + 5.0 * x(i, 1);
  const ProbeModel m = fit_probe(x, cyclic_labels(20, 2));
  double mean1 = 0.0;
  for (std::size_t i = 0; i < 20; ++i) mean1 += x(i, 1);
  EXPECT_NEAR(m.mean[1], mean1 / 20.0, 1e-12);
}

TEST(Accuracy, Examples) {
  const std::vector<int> y{0, 1, 0, 1};
  EXPECT_EQ(accuracy(y, y), 1.0);
  const std::vector<int> flipped{1, 0, 1, 0};
  EXPECT_EQ(accuracy(flipped, y), 0.0);
  RngStream rng(0);
  std::vector<int> pred(10000), truth(10000);
  for (std::size_t i = 0; i < 10000; ++i) {
    truth[i] = static_cast<int>(i % 4);
    pred[i] = static_cast<int>(rng.below(4));
  }
  EXPECT_NEAR(accuracy(pred, truth), 0.25, 0.02);
}

TEST(Accuracy, InvariantUnderConsistentRelabeling) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RngStream rng(seed);
    std::vector<int> pred(50), truth(50), perm{0, 1, 2, 3, 4};
    for (auto& v : pred) v = static_cast<int>(rng.below(5));
    for (auto& v : truth) v = static_cast<int>(rng.below(5));
    rng.shuffle(std::span<int>(perm));
    std::vector<int> p2(50), t2(50);
    for (std::size_t i = 0; i < 50; ++i) {
      p2[i] = perm[pred[i]];
      t2[i] = perm[truth[i]];
    }
    EXPECT_EQ(accuracy(pred, truth), accuracy(p2, t2));
  }
}

TEST(Predict, TiesGoToLowestIndex) {
  ProbeModel m;
  m.weights = Matrix(1, 3);
  m.bias = Matrix{{0.5, 0.5, 0.5}};
  m.mean = {0.0};
  m.scale = {1.0};
  EXPECT_EQ(m.predict(Matrix{{3.0}}), std::vector<int>{0});
}

TEST(EvaluateEmbeddings, ReportsEverySplit) {
  RngStream rng(0);
  const Graph g = generate_sbm({{40, 40}, 0.2, 0.02, 6, 2.0}, rng);
  const ProbeReport r = evaluate_embeddings(g.features(), g.labels(), 20, RngStream(3));
  EXPECT_EQ(r.test_accuracies.size(), 20u);
  const auto j = to_json(r);
  EXPECT_EQ(j["splits"], 20);
  EXPECT_EQ(j["accuracies"].size(), 20u);
  EXPECT_TRUE(j.contains("mean_acc"));
  EXPECT_TRUE(j.contains("std_acc"));
  EXPECT_GT(r.mean_acc, 0.8);
}

TEST(Vulnerability, StartsAtOneAndStaysInRange) {
  RngStream rng(0);
  const Graph g = generate_sbm({{20, 20}, 0.3, 0.05, 6}, rng);
  const EncoderParams p = init_params({6, 8, 4, 4}, rng);
  RngStream study(1);
  const auto rows = vulnerability_study(p, g, 0.03, 60, study);
  ASSERT_EQ(rows.size(), 61u);
  EXPECT_EQ(rows[0].mean_sim, 1.0);
  EXPECT_EQ(rows[0].std_sim, 0.0);
  EXPECT_EQ(rows[0].surviving_edge_frac, 1.0);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    EXPECT_EQ(rows[t].t, t);
    EXPECT_GE(rows[t].mean_sim, -1.0);
    EXPECT_LE(rows[t].mean_sim, 1.0);
    if (t > 0) {
      EXPECT_LE(rows[t].surviving_edge_frac, rows[t - 1].surviving_edge_frac);
    }
  }
  RngStream proj(1);
  EXPECT_EQ(vulnerability_study(p, g, 0.03, 3, proj, {true})[0].mean_sim, 1.0);
}

TEST(Vulnerability, CsvColumns) {
  const std::vector<VulnerabilityRow> rows{{0, 1.0, 0.0, 1.0, 1.0}, {1, 0.5, 0.25, 0.97, 1.0}};
  const auto path = std::filesystem::temp_directory_path() / "ariel_vuln.csv";
  write_vulnerability_csv(rows, path);
  std::ifstream in(path);
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(header, "t,mean_sim,std_sim,surviving_edge_frac,surviving_dim_frac");
  EXPECT_EQ(first, "0,1,0,1,1");
  EXPECT_EQ(second, "1,0.5,0.25,0.97,1");
  std::filesystem::remove(path);
}

TEST(RandomPoison, ZeroFractionsKeepGraph) {
  RngStream rng(0);
  const Graph g = random_graph(20, 5, 0.2, rng);
  EXPECT_EQ(random_poison(g, 0.0, 0.0, rng), g);
  EXPECT_THROW(random_poison(g, 1.5, 0.0, rng), DomainError);
}

TEST(RandomPoison, EdgesOnlyFullDeletion) {
  RngStream rng(1);
  const Graph g = random_graph(25, 3, 0.3, rng);
  const Graph empty = random_poison(g, 1.0, 0.0, rng, {true});
  EXPECT_EQ(empty.edge_count(), 0u);
  EXPECT_EQ(empty.features(), g.features());
}

TEST(RandomPoison, FlipCountOnCoraSizedEdgeSet) {
  // 5,429 edges on a 2,708-node ring-plus-chords graph.
  std::vector<Edge> edges;
  const std::size_t n = 2708;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
  for (std::size_t i = 0; edges.size() < 5429; ++i) edges.push_back({i % (n - 3), i % (n - 3) + 2 + i / (n - 3)});
  const Graph g = Graph::from_edges(n, edges, Matrix(n, 4, 1.0));
  ASSERT_EQ(g.edge_count(), 5429u);
  RngStream rng(2);
  const Graph p = random_poison(g, 0.2, 0.25, rng);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) changed += p.adjacency()(i, j) != g.adjacency()(i, j);
  EXPECT_EQ(changed, 1086u);
  std::size_t zero_cols = 0;
  for (std::size_t k = 0; k < 4; ++k) zero_cols += p.features()(0, k) == 0.0;
  EXPECT_EQ(zero_cols, 1u);
}
