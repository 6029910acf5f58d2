#include "ariel/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ariel/error.hpp"

namespace ariel {
namespace {

constexpr double kMinNorm = 1e-12;

struct UnitRows {
  Matrix unit;
  std::vector<double> norm;  // 0 for clamped rows
};

UnitRows unit_rows(const Matrix& z, ZeroRowPolicy policy, const char* name) {
  UnitRows r{Matrix(z.rows(), z.cols()), std::vector<double>(z.rows(), 0.0)};
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double nrm = norm2(z.row(i));
    if (!std::isfinite(nrm)) throw NumericError(std::string("non-finite entry in row ") + std::to_string(i) + " of " + name);
    if (nrm < kMinNorm) {
      if (policy == ZeroRowPolicy::kStrict) {
        throw DomainError(std::string("row ") + std::to_string(i) + " of " + name + " has zero norm");
      }
      continue;
    }
    r.norm[i] = nrm;
    for (std::size_t j = 0; j < z.cols(); ++j) r.unit(i, j) = z(i, j) / nrm;
  }
  return r;
}

// Maps ∂L/∂û back to ∂L/∂z for z = ‖z‖·û: (g − (g·û)û)/‖z‖.
Matrix unit_rows_backward(const UnitRows& r, const Matrix& grad_unit) {
  Matrix g(grad_unit.rows(), grad_unit.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (r.norm[i] == 0.0) continue;
    const double proj = dot(grad_unit.row(i), r.unit.row(i));
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = (grad_unit(i, j) - proj * r.unit(i, j)) / r.norm[i];
  }
  return g;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) throw ContractViolation(std::string(op) + ": embedding shapes differ");
}

// One direction of the loss for anchor row i: positives/inter-view logits in
// `cross` (all j), intra-view logits in `intra` (j ≠ i). Returns l_i and
// writes softmax weights into the gradient rows, scaled by `scale`.
double directional_term(std::span<const double> cross, std::span<const double> intra, std::size_t i, double tau,
                        double scale, std::span<double> g_cross, std::span<double> g_intra) {
  const std::size_t n = cross.size();
  double m = cross[0] / tau;
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, cross[j] / tau);
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) m = std::max(m, intra[j] / tau);
  double z = 0.0;
  for (std::size_t j = 0; j < n; ++j) z += std::exp(cross[j] / tau - m);
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) z += std::exp(intra[j] / tau - m);
  const double lse = m + std::log(z);
  for (std::size_t j = 0; j < n; ++j) g_cross[j] = scale * std::exp(cross[j] / tau - lse);
  g_cross[i] -= scale;
  for (std::size_t j = 0; j < n; ++j) g_intra[j] = j == i ? 0.0 : scale * std::exp(intra[j] / tau - lse);
  return lse - cross[i] / tau;
}

}  // namespace

Matrix pairwise_cosine(const Matrix& z1, const Matrix& z2, ZeroRowPolicy policy) {
  if (z1.cols() != z2.cols()) throw ContractViolation("pairwise_cosine: embedding widths differ");
  const UnitRows u = unit_rows(z1, policy, "Z1");
  const UnitRows v = unit_rows(z2, policy, "Z2");
  Matrix s = matmul_nt(u.unit, v.unit);
  for (double& x : s.values()) x = std::clamp(x, -1.0, 1.0);
  return s;
}

ContrastiveResult contrastive_loss(const Matrix& z1, const Matrix& z2, double tau, ZeroRowPolicy policy) {
  if (!(tau > 0.0)) throw DomainError("contrastive_loss: temperature must be positive");
  require_same_shape(z1, z2, "contrastive_loss");
  const std::size_t n = z1.rows();
  if (n == 0) throw ContractViolation("contrastive_loss: empty embeddings");

  const UnitRows u = unit_rows(z1, policy, "Z1");
  const UnitRows v = unit_rows(z2, policy, "Z2");
  const Matrix s_uv = matmul_nt(u.unit, v.unit);
  const Matrix s_vu = s_uv.transposed();
  const Matrix s_uu = matmul_nt(u.unit, u.unit);
  const Matrix s_vv = matmul_nt(v.unit, v.unit);

  const double scale = 1.0 / (2.0 * static_cast<double>(n) * tau);
  Matrix g_uv(n, n), g_vu(n, n), g_uu(n, n), g_vv(n, n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double l_uv = directional_term(s_uv.row(i), s_uu.row(i), i, tau, scale, g_uv.row(i), g_uu.row(i));
    const double l_vu = directional_term(s_vu.row(i), s_vv.row(i), i, tau, scale, g_vu.row(i), g_vv.row(i));
    total += l_uv + l_vu;
  }

  // S_vu = S_uvᵀ, and S_uu = U·Uᵀ contributes (G + Gᵀ)·U.
  Matrix d_u = matmul(g_uv + g_vu.transposed(), v.unit);
  d_u += matmul(g_uu + g_uu.transposed(), u.unit);
  Matrix d_v = matmul(g_vu + g_uv.transposed(), u.unit);
  d_v += matmul(g_vv + g_vv.transposed(), v.unit);

  ContrastiveResult r;
  r.loss = total / (2.0 * static_cast<double>(n));
  r.grad_z1 = unit_rows_backward(u, d_u);
  r.grad_z2 = unit_rows_backward(v, d_v);
  return r;
}

InfoRegResult info_regularization(const Matrix& z1, const Matrix& z2, const Matrix& z0, ZeroRowPolicy policy) {
  require_same_shape(z1, z2, "info_regularization");
  require_same_shape(z1, z0, "info_regularization");
  const std::size_t n = z1.rows();
  if (n == 0) throw ContractViolation("info_regularization: empty embeddings");
  const UnitRows a = unit_rows(z1, policy, "Z1");
  const UnitRows b = unit_rows(z2, policy, "Z2");
  const UnitRows o = unit_rows(z0, policy, "Z0");

  InfoRegResult r;
  r.grad_z1 = Matrix(z1.rows(), z1.cols());
  r.grad_z2 = Matrix(z1.rows(), z1.cols());
  r.grad_z0 = Matrix(z1.rows(), z1.cols());
  r.similarities.view1_view2.resize(n);
  r.similarities.view1_orig.resize(n);
  r.similarities.view2_orig.resize(n);
  const double w = 1.0 / static_cast<double>(n);
  Matrix gu_a(n, z1.cols()), gu_b(n, z1.cols()), gu_o(n, z1.cols());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c12 = dot(a.unit.row(i), b.unit.row(i));
    const double c10 = dot(a.unit.row(i), o.unit.row(i));
    const double c20 = dot(b.unit.row(i), o.unit.row(i));
    r.similarities.view1_view2[i] = c12;
    r.similarities.view1_orig[i] = c10;
    r.similarities.view2_orig[i] = c20;
    const double d = 2.0 * c12 - c20 - c10;
    if (!(d > 0.0)) continue;
    sum += d;
    // ∂d/∂â = 2b̂ − ô, ∂d/∂b̂ = 2â − ô, ∂d/∂ô = −â − b̂ (unit-vector space).
    for (std::size_t j = 0; j < z1.cols(); ++j) {
      gu_a(i, j) = w * (2.0 * b.unit(i, j) - o.unit(i, j));
      gu_b(i, j) = w * (2.0 * a.unit(i, j) - o.unit(i, j));
      gu_o(i, j) = -w * (a.unit(i, j) + b.unit(i, j));
    }
  }
  r.penalty = sum * w;
  r.grad_z1 = unit_rows_backward(a, gu_a);
  r.grad_z2 = unit_rows_backward(b, gu_b);
  r.grad_z0 = unit_rows_backward(o, gu_o);
  return r;
}

TotalLossResult total_loss(const Matrix& z1, const Matrix& z2, const Matrix& z_adv, const Matrix& z0, double tau,
                           double eps1, double eps2, ZeroRowPolicy policy) {
  if (!(eps1 >= 0.0) || !(eps2 >= 0.0)) throw DomainError("total_loss: coefficients must be non-negative");
  const ContrastiveResult con = contrastive_loss(z1, z2, tau, policy);
  const ContrastiveResult adv = contrastive_loss(z1, z_adv, tau, policy);
  InfoRegResult reg = info_regularization(z1, z2, z0, policy);

  TotalLossResult r;
  r.breakdown.contrastive = con.loss;
  r.breakdown.adversarial_contrastive = adv.loss;
  r.breakdown.info_reg = reg.penalty;
  r.breakdown.eps1 = eps1;
  r.breakdown.eps2 = eps2;
  r.breakdown.total = con.loss + eps1 * adv.loss + eps2 * reg.penalty;

  r.grad_z1 = con.grad_z1;
  r.grad_z1.add_scaled(adv.grad_z1, eps1);
  r.grad_z1.add_scaled(reg.grad_z1, eps2);
  r.grad_z2 = con.grad_z2;
  r.grad_z2.add_scaled(reg.grad_z2, eps2);
  r.grad_adv = adv.grad_z2 * eps1;
  r.grad_z0 = reg.grad_z0 * eps2;
  r.similarities = std::move(reg.similarities);
  return r;
}

}  // namespace ariel
