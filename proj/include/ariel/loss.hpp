#pragma once

#include <vector>

#include "ariel/matrix.hpp"

namespace ariel {

/// How cosine-based losses treat rows whose norm is below 1e-12.
enum class ZeroRowPolicy {
  /// Throw DomainError naming the row.
  kStrict,
  /// Treat the row as a zero vector: cosine 0 against everything and no
  /// gradient flowing into it. Used inside training, where a dead node can
  /// legitimately produce an all-zero projection.
  kClamp,
};

struct LossBreakdown {
  double contrastive = 0.0;
  double adversarial_contrastive = 0.0;
  double info_reg = 0.0;
  double total = 0.0;
  /// Coefficients the total was computed with.
  double eps1 = 0.0;
  double eps2 = 0.0;
};

/// Per-node cosines between view 1/view 2, view 1/original and view 2/original.
struct SimilarityTriple {
  std::vector<double> view1_view2;
  std::vector<double> view1_orig;
  std::vector<double> view2_orig;
};

/// (i,j) = cos(Z1[i], Z2[j]).
Matrix pairwise_cosine(const Matrix& z1, const Matrix& z2, ZeroRowPolicy policy = ZeroRowPolicy::kStrict);

struct ContrastiveResult {
  double loss = 0.0;
  Matrix grad_z1;
  Matrix grad_z2;
};

/// Symmetric two-view InfoNCE:
///   L = 1/(2n) Σᵢ [ l(uᵢ, vᵢ) + l(vᵢ, uᵢ) ]
///   l(uᵢ, vᵢ) = −log( e^{θᵢᵢ/τ} / (Σⱼ e^{θ(uᵢ,vⱼ)/τ} + Σ_{j≠i} e^{θ(uᵢ,uⱼ)/τ}) )
/// with θ the cosine similarity of projected rows.
ContrastiveResult contrastive_loss(const Matrix& z1, const Matrix& z2, double tau,
                                   ZeroRowPolicy policy = ZeroRowPolicy::kStrict);

struct InfoRegResult {
  double penalty = 0.0;
  Matrix grad_z1;
  Matrix grad_z2;
  Matrix grad_z0;
  SimilarityTriple similarities;
};

/// dᵢ = 2θ(Z1ᵢ,Z2ᵢ) − θ(Z2ᵢ,Z0ᵢ) − θ(Z1ᵢ,Z0ᵢ), penalty = mean max(dᵢ, 0).
/// θ is the raw cosine (no temperature). Subgradient 0 at dᵢ = 0.
InfoRegResult info_regularization(const Matrix& z1, const Matrix& z2, const Matrix& z0,
                                  ZeroRowPolicy policy = ZeroRowPolicy::kStrict);

struct TotalLossResult {
  LossBreakdown breakdown;
  Matrix grad_z1;
  Matrix grad_z2;
  Matrix grad_adv;
  Matrix grad_z0;
  SimilarityTriple similarities;
};

/// L = L_con(Z1,Z2) + ε₁·L_con(Z1,Z_adv) + ε₂·L_I(Z1,Z2,Z0).
TotalLossResult total_loss(const Matrix& z1, const Matrix& z2, const Matrix& z_adv, const Matrix& z0, double tau,
                           double eps1, double eps2, ZeroRowPolicy policy = ZeroRowPolicy::kStrict);

}  // namespace ariel
