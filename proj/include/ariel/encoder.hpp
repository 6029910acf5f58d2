#pragma once

#include <cstddef>
#include <vector>

#include "ariel/matrix.hpp"
#include "ariel/rng.hpp"

namespace ariel {

struct Architecture {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 128;
  std::size_t embed_dim = 128;
  std::size_t proj_dim = 128;
  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Two GCN layers (w1: d×h, w2: h×d') and the projection head
/// (p1: d'×h_p, b1: 1×h_p, p2: h_p×d', b2: 1×d').
///
/// Gradients use the same struct.
struct EncoderParams {
  Matrix w1, w2, p1, b1, p2, b2;

  Architecture architecture() const;
  /// Throws ContractViolation on inconsistent shapes or non-finite entries.
  void validate() const;

  static EncoderParams zeros(const Architecture& arch);

  EncoderParams& operator+=(const EncoderParams& other);
  friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

/// Glorot-uniform weights in ±√(6/(fan_in+fan_out)), zero biases.
EncoderParams init_params(const Architecture& arch, RngStream& rng);

enum class Activation { kRelu, kIdentity };

struct EncoderOptions {
  /// Nonlinearity of both GCN layers. kIdentity exists for closed-form tests.
  Activation activation = Activation::kRelu;
};

struct ForwardCache {
  Activation activation = Activation::kRelu;
  std::vector<double> inv_sqrt_degree;
  Matrix norm_adj;  // Â
  Matrix features;
  Matrix xw1;   // X·W1
  Matrix pre1;  // Â·X·W1
  Matrix h1;    // σ(pre1)
  Matrix hw2;   // h1·W2
  Matrix pre2;  // Â·h1·W2
};

struct EncodeResult {
  Matrix embeddings;
  ForwardCache cache;
};

/// H = σ(Â σ(Â X W1) W2), Â recomputed from the raw weighted adjacency.
EncodeResult encode(const Matrix& adjacency, const Matrix& features, const EncoderParams& params,
                    const EncoderOptions& options = {});

struct HeadCache {
  Matrix input;   // H
  Matrix pre;     // H·P1 + b1
  Matrix hidden;  // elu(pre)
};

struct ProjectResult {
  Matrix projected;
  HeadCache cache;
};

/// Z = elu(H·P1 + b1)·P2 + b2
ProjectResult project_head(const Matrix& embeddings, const EncoderParams& params);

struct BackwardOptions {
  bool param_grads = true;
  /// Gradients with respect to X and the raw adjacency.
  bool input_grads = true;
};

struct EncoderGradients {
  EncoderParams params;  // zero-shaped when not requested
  Matrix features;       // dX
  /// Symmetrized gradient with respect to the raw adjacency: entry (i,j)
  /// holds ∂L/∂A_ij + ∂L/∂A_ji, including the dependence of D̃ on A.
  /// Zero diagonal.
  Matrix adjacency;
};

/// Reverse pass from ∂L/∂Z through the head and both GCN layers.
EncoderGradients backward(const ForwardCache& cache, const HeadCache& head, const Matrix& grad_projected,
                          const EncoderParams& params, const BackwardOptions& options = {});

/// Reverse pass from ∂L/∂H through the GCN layers only; head gradients are zero.
EncoderGradients backward_from_embeddings(const ForwardCache& cache, const Matrix& grad_embeddings,
                                          const EncoderParams& params, const BackwardOptions& options = {});

}  // namespace ariel
