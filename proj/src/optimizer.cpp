#include "ariel/optimizer.hpp"

#include <array>
#include <cmath>

#include "ariel/error.hpp"

namespace ariel {
namespace {

std::array<Matrix*, 6> tensors(EncoderParams& p) { return {&p.w1, &p.w2, &p.p1, &p.b1, &p.p2, &p.b2}; }
std::array<const Matrix*, 6> tensors(const EncoderParams& p) { return {&p.w1, &p.w2, &p.p1, &p.b1, &p.p2, &p.b2}; }

}  // namespace

OptimizerState OptimizerState::for_params(const EncoderParams& params) {
  const Architecture a = params.architecture();
  return OptimizerState{EncoderParams::zeros(a), EncoderParams::zeros(a), 0};
}

void optimizer_step(EncoderParams& params, const EncoderParams& grads, OptimizerState& state, double learning_rate,
                    double weight_decay, const AdamSettings& s) {
  auto p = tensors(params);
  const auto g = tensors(grads);
  auto m = tensors(state.first_moment);
  auto v = tensors(state.second_moment);
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (!p[t]->same_shape(*g[t]) || !p[t]->same_shape(*m[t]) || !p[t]->same_shape(*v[t])) {
      throw ContractViolation("optimizer_step: gradient or state shape differs from parameters");
    }
  }
  ++state.step;
  const double step = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(s.beta1, step);
  const double correction2 = 1.0 - std::pow(s.beta2, step);
  for (std::size_t t = 0; t < p.size(); ++t) {
    double* theta = p[t]->data();
    const double* grad = g[t]->data();
    double* m1 = m[t]->data();
    double* m2 = v[t]->data();
    for (std::size_t k = 0; k < p[t]->size(); ++k) {
      m1[k] = s.beta1 * m1[k] + (1.0 - s.beta1) * grad[k];
      m2[k] = s.beta2 * m2[k] + (1.0 - s.beta2) * grad[k] * grad[k];
      const double m_hat = m1[k] / correction1;
      const double v_hat = m2[k] / correction2;
      theta[k] -= learning_rate * (m_hat / (std::sqrt(v_hat) + s.epsilon) + weight_decay * theta[k]);
    }
  }
}

}  // namespace ariel
