#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ariel/attack.hpp"
#include "ariel/encoder.hpp"
#include "ariel/error.hpp"
#include "ariel/graph.hpp"
#include "ariel/loss.hpp"

namespace ariel {

struct TrainConfig {
  double tau = 0.4;
  double eps1 = 1.0;
  double eps2 = 1.0;
  /// Curriculum: ε₁ ← γ·ε₁ after every period_t-th epoch.
  double gamma = 1.1;
  std::size_t period_t = 20;
  std::size_t subgraph_size = 500;
  double p_edge_1 = 0.2;
  double p_feat_1 = 0.3;
  double p_edge_2 = 0.4;
  double p_feat_2 = 0.4;
  double learning_rate = 1e-3;
  double weight_decay = 1e-5;
  /// One epoch is one sampled-subgraph iteration.
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
  std::size_t hidden_dim = 128;
  std::size_t embed_dim = 128;
  std::size_t proj_dim = 128;
  AttackConfig attack;

  void validate() const;
  Architecture architecture(std::size_t input_dim) const { return {input_dim, hidden_dim, embed_dim, proj_dim}; }
};

struct EpochRecord {
  std::size_t epoch = 0;
  /// breakdown.eps1 is the coefficient used in this epoch, before the
  /// curriculum update.
  LossBreakdown loss;
  bool attacked = false;
  AttackDiagnostics attack;
  double seconds = 0.0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
};

/// One JSON-lines record. Wall-clock time is left out unless requested so
/// that logs of identical runs are byte-identical.
nlohmann::json to_json(const EpochRecord& record, bool include_timing = false);

/// Aborted training: non-finite or exploding objective.
class CollapseError : public NumericError {
 public:
  CollapseError(std::size_t epoch, const LossBreakdown& last);
  std::size_t epoch() const noexcept { return epoch_; }
  const LossBreakdown& last() const noexcept { return last_; }

 private:
  std::size_t epoch_;
  LossBreakdown last_;
};

/// γ·eps1 when (epoch_index + 1) mod period = 0, eps1 otherwise.
double curriculum_update(double eps1, std::size_t epoch_index, double gamma, std::size_t period);

using EpochCallback = std::function<void(const EpochRecord&, const EncoderParams&)>;

struct TrainResult {
  EncoderParams params;
  TrainingLog log;
};

/// Per epoch: sample a subgraph, draw two augmented views, attack the
/// subgraph against the anchor view, minimize
/// L_con(G₁,G₂) + ε₁·L_con(G₁,G_adv) + ε₂·L_I(G₁,G₂,Gₛ), then apply the
/// curriculum. The callback sees every finished epoch.
TrainResult train(const Graph& graph, const TrainConfig& config, const EpochCallback& on_epoch = {});

/// Full-graph embeddings H = f(A, X).
Matrix embed(const Graph& graph, const EncoderParams& params);

}  // namespace ariel
