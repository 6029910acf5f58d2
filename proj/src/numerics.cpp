#include "ariel/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "ariel/error.hpp"

namespace ariel {

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ContractViolation("cosine_similarity: length mismatch");
  const double uu = dot(u, u);
  const double vv = dot(v, v);
  if (uu == 0.0) throw DomainError("cosine_similarity: argument u has zero norm");
  if (vv == 0.0) throw DomainError("cosine_similarity: argument v has zero norm");
  const double c = dot(u, v) / std::sqrt(uu * vv);
  return std::clamp(c, -1.0, 1.0);
}

Matrix finite_diff_gradient(const ScalarFunction& f, const Matrix& x, double h) {
  if (!(h > 0.0)) throw DomainError("finite_diff_gradient: step must be positive");
  Matrix probe = x;
  Matrix grad(x.rows(), x.cols());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double x0 = x.data()[k];
    probe.data()[k] = x0 + h;
    const double fp = f(probe);
    probe.data()[k] = x0 - h;
    const double fm = f(probe);
    probe.data()[k] = x0;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericError("finite_diff_gradient: non-finite value at entry " + std::to_string(k));
    }
    grad.data()[k] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace ariel
