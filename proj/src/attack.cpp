#include "ariel/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "ariel/error.hpp"

namespace ariel {
namespace {

double clipped_sum(std::span<const double> z, double shift) {
  double s = 0.0;
  for (double v : z) s += std::clamp(v - shift, 0.0, 1.0);
  return s;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Matrix projected_embeddings(const Matrix& adjacency, const Matrix& features, const EncoderParams& params) {
  return project_head(encode(adjacency, features, params).embeddings, params).projected;
}

}  // namespace

void AttackConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("AttackConfig: step sizes must be >= 0");
  if (!(delta_a_fraction >= 0.0)) throw DomainError("AttackConfig: delta_A fraction must be >= 0");
  if (!(delta_x >= 0.0)) throw DomainError("AttackConfig: delta_X must be >= 0");
  if (discrete_samples < 1) throw DomainError("AttackConfig: discrete_samples must be >= 1");
}

nlohmann::json to_json(const AttackDiagnostics& d) {
  return nlohmann::json{{"step_losses", d.step_losses}, {"relaxed_loss", d.relaxed_loss}, {"mu", d.mu},
                        {"flips", d.flips},             {"linf", d.linf},                 {"budget", d.budget},
                        {"edge_mass", d.edge_mass}};
}

double structure_budget(const Graph& graph, double delta_a_fraction) {
  return delta_a_fraction * static_cast<double>(graph.edge_count());
}

double bisect_dual(std::span<const double> z, double budget) {
  if (!(budget >= 0.0)) throw DomainError("bisect_dual: budget must be >= 0");
  if (!(clipped_sum(z, 0.0) > budget)) throw DomainError("bisect_dual: budget is not binding");
  double lo = 0.0;
  double hi = *std::max_element(z.begin(), z.end());
  if (!(clipped_sum(z, hi) <= budget)) throw Error("bisect_dual: bracket failure");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (clipped_sum(z, mid) > budget) lo = mid;
    else hi = mid;
  }
  return hi;
}

std::vector<double> project_structure(std::span<const double> z, double budget, double* mu) {
  if (!(budget >= 0.0)) throw DomainError("project_structure: budget must be >= 0");
  double shift = 0.0;
  if (clipped_sum(z, 0.0) > budget) shift = bisect_dual(z, budget);
  std::vector<double> out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = std::clamp(z[k] - shift, 0.0, 1.0);
  if (mu) *mu = shift;
  return out;
}

Matrix project_features(const Matrix& perturbation, double delta_x) {
  if (!(delta_x >= 0.0)) throw DomainError("project_features: delta_X must be >= 0");
  Matrix out = perturbation;
  for (double& v : out.values()) v = std::clamp(v, -delta_x, delta_x);
  return out;
}

std::vector<std::uint8_t> sample_edge_perturbation(std::span<const double> edge_vars, RngStream& rng) {
  std::vector<std::uint8_t> flips(edge_vars.size(), 0);
  for (std::size_t k = 0; k < edge_vars.size(); ++k) flips[k] = rng.bernoulli(edge_vars[k]) ? 1 : 0;
  return flips;
}

Matrix relaxed_adjacency(const Matrix& adjacency, const Matrix& complement, std::span<const double> edge_vars) {
  const std::size_t n = adjacency.rows();
  if (edge_vars.size() != PairIndex(n).size()) throw ContractViolation("relaxed_adjacency: wrong number of pair variables");
  Matrix a = adjacency;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      const double w = adjacency(i, j) + complement(i, j) * edge_vars[k];
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  return a;
}

Graph apply_perturbation(const Graph& graph, std::span<const std::uint8_t> edge_flips, const Matrix& feat_perturbation) {
  if (!graph.is_binary()) throw ContractViolation("apply_perturbation: graph must be binary");
  const std::size_t n = graph.num_nodes();
  if (edge_flips.size() != PairIndex(n).size()) throw ContractViolation("apply_perturbation: wrong number of pair flips");
  if (!feat_perturbation.same_shape(graph.features())) {
    throw ContractViolation("apply_perturbation: feature perturbation shape mismatch");
  }
  Matrix a = graph.adjacency();
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (!edge_flips[k]) continue;
      const double w = 1.0 - a(i, j);
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  return Graph(std::move(a), graph.features() + feat_perturbation, graph.labels());
}

AttackResult pgd_attack(const Graph& graph, const Graph& anchor, const EncoderParams& params,
                        const AttackConfig& config, double tau, RngStream& rng, ZeroRowPolicy policy) {
  config.validate();
  if (anchor.num_nodes() != graph.num_nodes()) throw ContractViolation("pgd_attack: anchor node count differs");
  const std::size_t n = graph.num_nodes();
  const PairIndex pairs(n);
  const Matrix complement = complement_mask(graph.adjacency());
  const Matrix z_anchor = projected_embeddings(anchor.adjacency(), anchor.features(), params);

  AttackResult result;
  AttackDiagnostics& diag = result.diagnostics;
  PerturbationState& state = result.state;
  diag.budget = structure_budget(graph, config.delta_a_fraction);
  state.edge_vars.assign(pairs.size(), 0.0);
  state.feat_vars = Matrix(n, graph.feature_dim());

  std::vector<double> stepped(pairs.size());
  for (std::size_t t = 1; t <= config.steps; ++t) {
    const Matrix adj = relaxed_adjacency(graph.adjacency(), complement, state.edge_vars);
    const Matrix x = graph.features() + state.feat_vars;
    const EncodeResult enc = encode(adj, x, params);
    const ProjectResult head = project_head(enc.embeddings, params);
    const ContrastiveResult con = contrastive_loss(z_anchor, head.projected, tau, policy);
    diag.step_losses.push_back(con.loss);
    const EncoderGradients g =
        backward(enc.cache, head.cache, con.grad_z2, params, BackwardOptions{.param_grads = false, .input_grads = true});

    // ∂L/∂L̃_k = C_ij · (∂L/∂A_ij + ∂L/∂A_ji), the latter already symmetrized.
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++k)
        stepped[k] = state.edge_vars[k] + config.alpha * complement(i, j) * g.adjacency(i, j);
    state.edge_vars = project_structure(stepped, diag.budget, &diag.mu);

    for (std::size_t e = 0; e < state.feat_vars.size(); ++e)
      state.feat_vars.data()[e] += config.beta * sign(g.features.data()[e]);
    state.feat_vars = project_features(state.feat_vars, config.delta_x);

    double mass = 0.0;
    for (double v : state.edge_vars) mass += v;
    diag.edge_mass.push_back(mass);
  }

  const Matrix x_adv = graph.features() + state.feat_vars;
  const Matrix adj_final = relaxed_adjacency(graph.adjacency(), complement, state.edge_vars);
  diag.relaxed_loss = contrastive_loss(z_anchor, projected_embeddings(adj_final, x_adv, params), tau, policy).loss;

  std::vector<std::uint8_t> best = sample_edge_perturbation(state.edge_vars, rng);
  if (config.discrete_samples > 1) {
    auto loss_of = [&](const std::vector<std::uint8_t>& flips) {
      const Graph candidate = apply_perturbation(graph, flips, state.feat_vars);
      return contrastive_loss(z_anchor, projected_embeddings(candidate.adjacency(), candidate.features(), params), tau,
                              policy)
          .loss;
    };
    double best_loss = loss_of(best);
    for (std::size_t s = 1; s < config.discrete_samples; ++s) {
      auto candidate = sample_edge_perturbation(state.edge_vars, rng);
      const double l = loss_of(candidate);
      if (l > best_loss) {
        best_loss = l;
        best = std::move(candidate);
      }
    }
  }
  diag.flips = static_cast<std::size_t>(std::count(best.begin(), best.end(), std::uint8_t{1}));
  diag.linf = max_abs(state.feat_vars);
  result.adversarial = apply_perturbation(graph, best, state.feat_vars);
  return result;
}

}  // namespace ariel
