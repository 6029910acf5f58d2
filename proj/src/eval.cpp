#include "ariel/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ariel/error.hpp"
#include "ariel/loss.hpp"

namespace ariel {
namespace {

std::pair<double, double> mean_std(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  return {m, std::sqrt(var / static_cast<double>(v.size()))};
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

ProbeReport evaluate_embeddings(const Matrix& embeddings, std::span<const int> labels, std::size_t splits,
                                const RngStream& rng, const ProbeOptions& options) {
  if (embeddings.rows() != labels.size()) throw ContractViolation("evaluate_embeddings: one label per row required");
  if (splits == 0) throw DomainError("evaluate_embeddings: need at least one split");
  ProbeReport report;
  for (std::size_t s = 0; s < splits; ++s) {
    RngStream split_rng = rng.substream(s);
    const SplitMasks masks = make_split(labels, split_rng);
    const ProbeModel model =
        fit_probe(select_rows(embeddings, masks.train), select(labels, masks.train), options);
    report.test_accuracies.push_back(
        accuracy(model, select_rows(embeddings, masks.test), select(labels, masks.test)));
    report.val_accuracies.push_back(accuracy(model, select_rows(embeddings, masks.val), select(labels, masks.val)));
  }
  std::tie(report.mean_acc, report.std_acc) = mean_std(report.test_accuracies);
  return report;
}

nlohmann::json to_json(const ProbeReport& r) {
  return nlohmann::json{{"splits", r.test_accuracies.size()},
                        {"mean_acc", r.mean_acc},
                        {"std_acc", r.std_acc},
                        {"accuracies", r.test_accuracies},
                        {"val_accuracies", r.val_accuracies}};
}

std::vector<VulnerabilityRow> vulnerability_study(const EncoderParams& params, const Graph& graph, double p,
                                                  std::size_t steps, RngStream& rng,
                                                  const VulnerabilityOptions& options) {
  auto embed_view = [&](const Graph& g) {
    Matrix h = encode(g.adjacency(), g.features(), params).embeddings;
    return options.use_projection ? project_head(h, params).projected : h;
  };
  const double edges0 = static_cast<double>(graph.edge_count());
  const double dims0 = static_cast<double>(graph.feature_dim());

  Matrix reference;
  std::vector<std::size_t> live;  // nodes with a nonzero reference row
  std::vector<double> ref_sq;
  std::vector<VulnerabilityRow> rows;
  for_each_degradation(graph, p, steps, rng, [&](std::size_t t, const GraphView& view) {
    const Matrix h = embed_view(view.graph);
    if (t == 0) {
      reference = h;
      ref_sq.assign(h.rows(), 0.0);
      for (std::size_t i = 0; i < h.rows(); ++i) {
        ref_sq[i] = dot(h.row(i), h.row(i));
        if (ref_sq[i] > 0.0) live.push_back(i);
      }
    }
    std::vector<double> sims;
    sims.reserve(live.size());
    for (std::size_t i : live) {
      const double hh = dot(h.row(i), h.row(i));
      if (hh == 0.0) {
        sims.push_back(0.0);
        continue;
      }
      const double c = dot(h.row(i), reference.row(i)) / std::sqrt(hh * ref_sq[i]);
      sims.push_back(std::clamp(c, -1.0, 1.0));
    }
    VulnerabilityRow row;
    row.t = t;
    std::tie(row.mean_sim, row.std_sim) = mean_std(sims);
    row.surviving_edge_frac = edges0 > 0 ? (edges0 - static_cast<double>(view.dropped_edges.size())) / edges0 : 1.0;
    row.surviving_dim_frac = dims0 > 0 ? (dims0 - static_cast<double>(view.masked_dims.size())) / dims0 : 1.0;
    rows.push_back(row);
  });
  return rows;
}

void write_vulnerability_csv(const std::vector<VulnerabilityRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "t,mean_sim,std_sim,surviving_edge_frac,surviving_dim_frac\n";
  for (const auto& r : rows) {
    out << r.t << ',' << format_double(r.mean_sim) << ',' << format_double(r.std_sim) << ','
        << format_double(r.surviving_edge_frac) << ',' << format_double(r.surviving_dim_frac) << '\n';
  }
}

Graph random_poison(const Graph& graph, double edge_flip_fraction, double feat_mask_fraction, RngStream& rng,
                    const PoisonOptions& options) {
  for (double f : {edge_flip_fraction, feat_mask_fraction})
    if (!(f >= 0.0 && f <= 1.0)) throw DomainError("random_poison: fractions must lie in [0,1]");
  if (!graph.is_binary()) throw ContractViolation("random_poison: graph must be binary");
  const std::size_t n = graph.num_nodes();
  const std::size_t edge_count = graph.edge_count();
  const auto flips = static_cast<std::size_t>(std::llround(edge_flip_fraction * static_cast<double>(edge_count)));

  Matrix a = graph.adjacency();
  auto toggle = [&a](const Edge& e) {
    const double w = 1.0 - a(e.u, e.v);
    a(e.u, e.v) = w;
    a(e.v, e.u) = w;
  };
  if (options.edges_only) {
    std::vector<Edge> edges = graph.edges();
    // Partial Fisher–Yates over the existing edges.
    for (std::size_t i = 0; i < flips; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(edges.size() - i));
      std::swap(edges[i], edges[j]);
      toggle(edges[i]);
    }
  } else {
    const PairIndex pairs(n);
    const std::size_t total = pairs.size();
    if (flips > total) throw DomainError("random_poison: more flips than node pairs");
    // Floyd's sampling of `flips` distinct pair indices.
    std::unordered_set<std::size_t> chosen;
    std::vector<std::size_t> order;
    for (std::size_t j = total - flips; j < total; ++j) {
      const auto r = static_cast<std::size_t>(rng.below(j + 1));
      const std::size_t pick = chosen.insert(r).second ? r : j;
      if (pick == j) chosen.insert(j);
      order.push_back(pick);
    }
    for (std::size_t k : order) toggle(pairs.pair(k));
  }

  const std::size_t d = graph.feature_dim();
  const auto masked = static_cast<std::size_t>(std::llround(feat_mask_fraction * static_cast<double>(d)));
  std::vector<std::size_t> dims(d);
  std::iota(dims.begin(), dims.end(), std::size_t{0});
  for (std::size_t i = 0; i < masked; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(d - i));
    std::swap(dims[i], dims[j]);
  }
  Matrix x = graph.features();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < masked; ++k) x(i, dims[k]) = 0.0;
  return Graph(std::move(a), std::move(x), graph.labels());
}

}  // namespace ariel
