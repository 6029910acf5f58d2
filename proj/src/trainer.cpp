#include "ariel/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "ariel/optimizer.hpp"

namespace ariel {
namespace {

constexpr double kCollapseThreshold = 1e4;

std::string describe(std::size_t epoch, const LossBreakdown& b) {
  return "training collapsed at epoch " + std::to_string(epoch) + ": total=" + std::to_string(b.total) +
         " contrastive=" + std::to_string(b.contrastive) + " adversarial=" + std::to_string(b.adversarial_contrastive) +
         " info_reg=" + std::to_string(b.info_reg);
}

const Graph& pick_anchor(AttackAnchor anchor, const GraphView& v1, const GraphView& v2, const Graph& original) {
  switch (anchor) {
    case AttackAnchor::kView1: return v1.graph;
    case AttackAnchor::kView2: return v2.graph;
    case AttackAnchor::kOriginal: return original;
  }
  return v1.graph;
}

struct Pass {
  EncodeResult enc;
  ProjectResult head;
};

Pass forward(const Graph& g, const EncoderParams& params) {
  Pass p{encode(g.adjacency(), g.features(), params), {}};
  p.head = project_head(p.enc.embeddings, params);
  return p;
}

void accumulate(EncoderParams& total, const Pass& pass, const Matrix& grad, const EncoderParams& params) {
  if (max_abs(grad) == 0.0) return;
  total += backward(pass.enc.cache, pass.head.cache, grad, params,
                    BackwardOptions{.param_grads = true, .input_grads = false})
               .params;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  if (!(eps1 >= 0.0) || !(eps2 >= 0.0)) throw DomainError("eps1 and eps2 must be non-negative");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (period_t < 1) throw DomainError("period_T must be >= 1");
  if (subgraph_size < 1) throw DomainError("subgraph_size must be positive");
  for (double p : {p_edge_1, p_feat_1, p_edge_2, p_feat_2})
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("augmentation rates must lie in [0,1]");
  if (!(learning_rate > 0.0) || !(weight_decay >= 0.0)) throw DomainError("invalid optimizer settings");
  if (hidden_dim == 0 || embed_dim == 0 || proj_dim == 0) throw DomainError("layer widths must be positive");
  attack.validate();
}

nlohmann::json to_json(const EpochRecord& r, bool include_timing) {
  nlohmann::json j{{"epoch", r.epoch},
                   {"contrastive", r.loss.contrastive},
                   {"adversarial_contrastive", r.loss.adversarial_contrastive},
                   {"info_reg", r.loss.info_reg},
                   {"total", r.loss.total},
                   {"eps1", r.loss.eps1},
                   {"eps2", r.loss.eps2},
                   {"attacked", r.attacked}};
  if (r.attacked) j["attack"] = to_json(r.attack);
  if (include_timing) j["seconds"] = r.seconds;
  return j;
}

namespace {

LossBreakdown diverged(double eps1, double eps2) {
  LossBreakdown b;
  b.total = std::numeric_limits<double>::quiet_NaN();
  b.eps1 = eps1;
  b.eps2 = eps2;
  return b;
}

}  // namespace

CollapseError::CollapseError(std::size_t epoch, const LossBreakdown& last)
    : NumericError(describe(epoch, last)), epoch_(epoch), last_(last) {}

double curriculum_update(double eps1, std::size_t epoch_index, double gamma, std::size_t period) {
  if (period == 0) throw DomainError("curriculum_update: period must be >= 1");
  return (epoch_index + 1) % period == 0 ? gamma * eps1 : eps1;
}

TrainResult train(const Graph& graph, const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  if (!graph.is_binary()) throw ContractViolation("train: graph must be binary");

  const RngStream root(config.seed);
  RngStream init_rng = root.substream("init");
  RngStream sample_rng = root.substream("subgraph");
  RngStream augment_rng = root.substream("augment");
  RngStream attack_rng = root.substream("attack");

  TrainResult result;
  EncoderParams& params = result.params;
  params = init_params(config.architecture(graph.feature_dim()), init_rng);
  OptimizerState opt = OptimizerState::for_params(params);
  const std::size_t m = std::min(config.subgraph_size, graph.num_nodes());
  double eps1 = config.eps1;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    EpochRecord record;
    record.epoch = epoch;

    const SubgraphHandle sub = sample_subgraph(graph, m, sample_rng);
    const GraphView v1 = augment(sub.graph, config.p_edge_1, config.p_feat_1, augment_rng);
    const GraphView v2 = augment(sub.graph, config.p_edge_2, config.p_feat_2, augment_rng);

    const Pass p1 = forward(v1.graph, params);
    const Pass p2 = forward(v2.graph, params);
    const Pass p0 = forward(sub.graph, params);
    for (const Pass* pass : {&p1, &p2, &p0}) {
      if (!all_finite(pass->head.projected)) throw CollapseError(epoch, diverged(eps1, config.eps2));
    }

    Graph adversarial = sub.graph;
    if (eps1 > 0.0) {
      AttackResult attack = pgd_attack(sub.graph, pick_anchor(config.attack.anchor, v1, v2, sub.graph), params,
                                       config.attack, config.tau, attack_rng);
      adversarial = std::move(attack.adversarial);
      record.attacked = true;
      record.attack = std::move(attack.diagnostics);
    }

    // Without an attack the adversarial view is the subgraph itself.
    std::optional<Pass> attacked_pass;
    if (record.attacked) attacked_pass = forward(adversarial, params);
    const Pass& pa = attacked_pass ? *attacked_pass : p0;
    if (!all_finite(pa.head.projected)) throw CollapseError(epoch, diverged(eps1, config.eps2));
    const TotalLossResult loss = total_loss(p1.head.projected, p2.head.projected, pa.head.projected,
                                            p0.head.projected, config.tau, eps1, config.eps2, ZeroRowPolicy::kClamp);
    record.loss = loss.breakdown;
    if (!std::isfinite(loss.breakdown.total) || loss.breakdown.total > kCollapseThreshold) {
      throw CollapseError(epoch, loss.breakdown);
    }

    EncoderParams grads = EncoderParams::zeros(params.architecture());
    accumulate(grads, p1, loss.grad_z1, params);
    accumulate(grads, p2, loss.grad_z2, params);
    accumulate(grads, pa, loss.grad_adv, params);
    accumulate(grads, p0, loss.grad_z0, params);
    optimizer_step(params, grads, opt, config.learning_rate, config.weight_decay);

    eps1 = curriculum_update(eps1, epoch, config.gamma, config.period_t);
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_epoch) on_epoch(record, params);
    result.log.epochs.push_back(std::move(record));
  }
  return result;
}

Matrix embed(const Graph& graph, const EncoderParams& params) {
  return encode(graph.adjacency(), graph.features(), params).embeddings;
}

}  // namespace ariel
