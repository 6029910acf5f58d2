#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ariel/encoder.hpp"
#include "ariel/graph.hpp"
#include "ariel/loss.hpp"
#include "ariel/matrix.hpp"
#include "ariel/rng.hpp"

namespace ariel {

enum class AttackAnchor { kView1, kView2, kOriginal };

struct AttackConfig {
  std::size_t steps = 5;
  /// Structure step size (plain gradient).
  double alpha = 0.1;
  /// Feature step size (sign gradient).
  double beta = 0.01;
  /// Edge budget as a fraction of Σᵢⱼ A[i,j]. Perturbation variables live on
  /// unordered pairs, so the pair budget is half of that mass: fraction × |E|.
  double delta_a_fraction = 0.1;
  /// l∞ bound on the feature perturbation.
  double delta_x = 0.5;
  AttackAnchor anchor = AttackAnchor::kView1;
  std::size_t discrete_samples = 1;

  void validate() const;
};

/// Relaxed edge variables over unordered pairs (PairIndex order) and the
/// feature perturbation.
struct PerturbationState {
  std::vector<double> edge_vars;
  Matrix feat_vars;
};

struct AttackDiagnostics {
  /// Relaxed loss L_con(anchor, G_adv^{(t-1)}) seen at each step.
  std::vector<double> step_losses;
  /// Relaxed loss at the final iterate (equals the clean loss when steps = 0).
  double relaxed_loss = 0.0;
  /// Dual shift from the last structure projection (0 when the budget was slack).
  double mu = 0.0;
  std::size_t flips = 0;
  double linf = 0.0;
  /// Unordered-pair budget B and Σ L̃_A after each step.
  double budget = 0.0;
  std::vector<double> edge_mass;
};

/// {"budget", "edge_mass", "flips", "linf", "mu", "relaxed_loss", "step_losses"}
nlohmann::json to_json(const AttackDiagnostics& d);

/// Pair budget B = fraction · |E| (i.e. half of fraction · Σᵢⱼ A[i,j]).
double structure_budget(const Graph& graph, double delta_a_fraction);

/// μ > 0 with Σ clip(zᵢ − μ, 0, 1) = B, by bisection on [0, max z]. Requires
/// Σ clip(zᵢ, 0, 1) > B ≥ 0. Returns the feasible end of the final bracket,
/// so the shifted sum never exceeds B.
double bisect_dual(std::span<const double> z, double budget);

/// Projection onto {x ∈ [0,1]^m : Σx ≤ B}. Reports μ (0 when no shift was needed).
std::vector<double> project_structure(std::span<const double> z, double budget, double* mu = nullptr);

/// Entry-wise clip to [−δ_X, δ_X].
Matrix project_features(const Matrix& perturbation, double delta_x);

/// Independent Bernoulli(edge_vars[k]) draws.
std::vector<std::uint8_t> sample_edge_perturbation(std::span<const double> edge_vars, RngStream& rng);

/// A + C∘L̃ for relaxed pair variables; symmetric with zero diagonal.
Matrix relaxed_adjacency(const Matrix& adjacency, const Matrix& complement, std::span<const double> edge_vars);

/// Toggles every flipped pair and adds the feature perturbation.
Graph apply_perturbation(const Graph& graph, std::span<const std::uint8_t> edge_flips, const Matrix& feat_perturbation);

struct AttackResult {
  Graph adversarial;
  PerturbationState state;
  AttackDiagnostics diagnostics;
};

/// PGD on the relaxed structure variables and the features, maximizing
/// L_con(anchor, G'). Parameters stay fixed; the returned graph is binary.
AttackResult pgd_attack(const Graph& graph, const Graph& anchor, const EncoderParams& params,
                        const AttackConfig& config, double tau, RngStream& rng,
                        ZeroRowPolicy policy = ZeroRowPolicy::kClamp);

}  // namespace ariel
