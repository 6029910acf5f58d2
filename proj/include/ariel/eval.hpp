#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ariel/encoder.hpp"
#include "ariel/graph.hpp"
#include "ariel/probe.hpp"
#include "ariel/rng.hpp"

namespace ariel {

struct ProbeReport {
  std::vector<double> test_accuracies;
  std::vector<double> val_accuracies;
  double mean_acc = 0.0;
  /// Population standard deviation over splits.
  double std_acc = 0.0;
};

/// Fits one probe per random 10/10/80 split (split s uses rng.substream(s)).
ProbeReport evaluate_embeddings(const Matrix& embeddings, std::span<const int> labels, std::size_t splits,
                                const RngStream& rng, const ProbeOptions& options = {});

/// {"accuracies": [...], "mean_acc": …, "splits": k, "std_acc": …, "val_accuracies": [...]}
nlohmann::json to_json(const ProbeReport& report);

struct VulnerabilityRow {
  std::size_t t = 0;
  double mean_sim = 0.0;
  double std_sim = 0.0;
  double surviving_edge_frac = 1.0;
  double surviving_dim_frac = 1.0;
};

struct VulnerabilityOptions {
  /// Compare projected rather than raw embeddings.
  bool use_projection = false;
};

/// Encodes every graph of a degradation sequence and reports, per step, the
/// mean and population std over nodes of cos(H_t[i], H_0[i]). Nodes whose
/// H_0 row is zero have no direction and are left out; a zero H_t row
/// against a nonzero H_0 row counts as similarity 0.
std::vector<VulnerabilityRow> vulnerability_study(const EncoderParams& params, const Graph& graph, double p,
                                                  std::size_t steps, RngStream& rng,
                                                  const VulnerabilityOptions& options = {});

/// CSV with header t,mean_sim,std_sim,surviving_edge_frac,surviving_dim_frac.
void write_vulnerability_csv(const std::vector<VulnerabilityRow>& rows, const std::filesystem::path& path);

struct PoisonOptions {
  /// Flip only existing edges (deletions) instead of arbitrary pairs.
  bool edges_only = false;
};

/// Toggles round(edge_flip_fraction·|E|) distinct uniformly chosen pairs and
/// zeroes round(feat_mask_fraction·d) uniformly chosen feature columns.
Graph random_poison(const Graph& graph, double edge_flip_fraction, double feat_mask_fraction, RngStream& rng,
                    const PoisonOptions& options = {});

}  // namespace ariel
