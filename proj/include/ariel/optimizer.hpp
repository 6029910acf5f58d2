#pragma once

#include <cstdint>

#include "ariel/encoder.hpp"

namespace ariel {

/// Adaptive-moment state mirroring EncoderParams.
struct OptimizerState {
  EncoderParams first_moment;
  EncoderParams second_moment;
  std::uint64_t step = 0;

  static OptimizerState for_params(const EncoderParams& params);
};

struct AdamSettings {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected adaptive-moment step with decoupled weight decay:
///   θ ← θ − lr · (m̂ / (√v̂ + ε) + wd · θ)
void optimizer_step(EncoderParams& params, const EncoderParams& grads, OptimizerState& state, double learning_rate,
                    double weight_decay, const AdamSettings& settings = {});

}  // namespace ariel
