#include "ariel/encoder.hpp"

#include <cmath>
#include <string>

#include "ariel/error.hpp"
#include "ariel/graph.hpp"

namespace ariel {
namespace {

void glorot(Matrix& w, RngStream& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (double& v : w.values()) v = bound * (2.0 * rng.uniform() - 1.0);
}

Matrix activate(const Matrix& pre, Activation act) {
  if (act == Activation::kIdentity) return pre;
  Matrix out = pre;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

// grad ⊙ σ'(pre), with σ'(0) = 0 for the rectifier.
Matrix activate_backward(const Matrix& grad, const Matrix& pre, Activation act) {
  if (act == Activation::kIdentity) return grad;
  Matrix out = grad;
  for (std::size_t k = 0; k < out.size(); ++k)
    if (!(pre.data()[k] > 0.0)) out.data()[k] = 0.0;
  return out;
}

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }
double elu_grad(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

void add_row_bias(Matrix& m, const Matrix& bias) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += bias(0, j);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}

void check_cache(const ForwardCache& cache, const Matrix& grad, const EncoderParams& params) {
  const std::size_t n = cache.norm_adj.rows();
  require(grad.rows() == n && grad.cols() == params.w2.cols(), "backward: gradient shape does not match the cache");
  require(cache.features.rows() == n && cache.features.cols() == params.w1.rows(),
          "backward: cache features do not match the parameters");
  require(cache.pre1.rows() == n && cache.pre1.cols() == params.w1.cols() && cache.pre2.rows() == n &&
              cache.pre2.cols() == params.w2.cols() && cache.inv_sqrt_degree.size() == n,
          "backward: stale cache");
}

}  // namespace

Architecture EncoderParams::architecture() const {
  return Architecture{w1.rows(), w1.cols(), w2.cols(), p1.cols()};
}

void EncoderParams::validate() const {
  const Architecture a = architecture();
  require(w2.rows() == a.hidden_dim, "EncoderParams: w2 rows differ from hidden width");
  require(p1.rows() == a.embed_dim, "EncoderParams: p1 rows differ from embedding width");
  require(b1.rows() == 1 && b1.cols() == a.proj_dim, "EncoderParams: b1 shape");
  require(p2.rows() == a.proj_dim && p2.cols() == a.embed_dim, "EncoderParams: p2 shape");
  require(b2.rows() == 1 && b2.cols() == a.embed_dim, "EncoderParams: b2 shape");
  for (const Matrix* m : {&w1, &w2, &p1, &b1, &p2, &b2})
    require(all_finite(*m), "EncoderParams: non-finite entry");
}

EncoderParams EncoderParams::zeros(const Architecture& a) {
  return EncoderParams{Matrix(a.input_dim, a.hidden_dim), Matrix(a.hidden_dim, a.embed_dim),
                       Matrix(a.embed_dim, a.proj_dim),   Matrix(1, a.proj_dim),
                       Matrix(a.proj_dim, a.embed_dim),   Matrix(1, a.embed_dim)};
}

EncoderParams& EncoderParams::operator+=(const EncoderParams& o) {
  w1 += o.w1;
  w2 += o.w2;
  p1 += o.p1;
  b1 += o.b1;
  p2 += o.p2;
  b2 += o.b2;
  return *this;
}

EncoderParams init_params(const Architecture& arch, RngStream& rng) {
  if (arch.input_dim == 0 || arch.hidden_dim == 0 || arch.embed_dim == 0 || arch.proj_dim == 0) {
    throw DomainError("init_params: dimensions must be positive");
  }
  EncoderParams p = EncoderParams::zeros(arch);
  glorot(p.w1, rng);
  glorot(p.w2, rng);
  glorot(p.p1, rng);
  glorot(p.p2, rng);
  return p;
}

EncodeResult encode(const Matrix& adjacency, const Matrix& features, const EncoderParams& params,
                    const EncoderOptions& options) {
  require(adjacency.rows() == features.rows(), "encode: adjacency and feature row counts differ");
  require(features.cols() == params.w1.rows(), "encode: feature width " + std::to_string(features.cols()) +
                                                   " does not match W1 rows " + std::to_string(params.w1.rows()));
  require(params.w1.cols() == params.w2.rows(), "encode: W1/W2 shapes disagree");

  EncodeResult r;
  ForwardCache& c = r.cache;
  c.activation = options.activation;
  c.norm_adj = normalize_adjacency(adjacency, &c.inv_sqrt_degree);
  c.features = features;
  c.xw1 = matmul(features, params.w1);
  c.pre1 = matmul(c.norm_adj, c.xw1);
  c.h1 = activate(c.pre1, c.activation);
  c.hw2 = matmul(c.h1, params.w2);
  c.pre2 = matmul(c.norm_adj, c.hw2);
  r.embeddings = activate(c.pre2, c.activation);
  return r;
}

ProjectResult project_head(const Matrix& embeddings, const EncoderParams& params) {
  require(embeddings.cols() == params.p1.rows(), "project_head: embedding width does not match P1");
  ProjectResult r;
  r.cache.input = embeddings;
  r.cache.pre = matmul(embeddings, params.p1);
  add_row_bias(r.cache.pre, params.b1);
  r.cache.hidden = r.cache.pre;
  for (double& v : r.cache.hidden.values()) v = elu(v);
  r.projected = matmul(r.cache.hidden, params.p2);
  add_row_bias(r.projected, params.b2);
  return r;
}

EncoderGradients backward_from_embeddings(const ForwardCache& c, const Matrix& grad_embeddings,
                                          const EncoderParams& params, const BackwardOptions& options) {
  check_cache(c, grad_embeddings, params);
  const std::size_t n = c.norm_adj.rows();
  EncoderGradients g;
  g.params = EncoderParams::zeros(params.architecture());

  // Layer 2: pre2 = Â·hw2, hw2 = h1·W2. Â is symmetric.
  const Matrix d_pre2 = activate_backward(grad_embeddings, c.pre2, c.activation);
  const Matrix d_hw2 = matmul(c.norm_adj, d_pre2);
  if (options.param_grads) g.params.w2 = matmul_tn(c.h1, d_hw2);
  // Layer 1: pre1 = Â·xw1, xw1 = X·W1.
  const Matrix d_h1 = matmul_nt(d_hw2, params.w2);
  const Matrix d_pre1 = activate_backward(d_h1, c.pre1, c.activation);
  const Matrix d_xw1 = matmul(c.norm_adj, d_pre1);
  if (options.param_grads) g.params.w1 = matmul_tn(c.features, d_xw1);

  if (!options.input_grads) return g;
  g.features = matmul_nt(d_xw1, params.w1);

  // ∂L/∂Â, then through Â = S·(A+I)·S with S = diag(d^{-1/2}), d = 1 + row sums of A.
  Matrix d_norm = matmul_nt(d_pre2, c.hw2);
  d_norm += matmul_nt(d_pre1, c.xw1);
  const std::vector<double>& s = c.inv_sqrt_degree;
  std::vector<double> d_degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double ds = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.norm_adj(i, j);  // = s_i Ã_ij s_j
      if (a != 0.0) ds += (d_norm(i, j) + d_norm(j, i)) * a / s[i];
    }
    d_degree[i] = -0.5 * s[i] * s[i] * s[i] * ds;
  }
  g.adjacency = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (d_norm(i, j) + d_norm(j, i)) * s[i] * s[j] + d_degree[i] + d_degree[j];
      g.adjacency(i, j) = v;
      g.adjacency(j, i) = v;
    }
  }
  return g;
}

EncoderGradients backward(const ForwardCache& cache, const HeadCache& head, const Matrix& grad_projected,
                          const EncoderParams& params, const BackwardOptions& options) {
  require(grad_projected.rows() == head.hidden.rows() && grad_projected.cols() == params.p2.cols() &&
              head.input.rows() == cache.norm_adj.rows(),
          "backward: head cache does not match the gradient");
  // Z = V·P2 + b2, V = elu(U), U = H·P1 + b1.
  Matrix d_pre = matmul_nt(grad_projected, params.p2);
  for (std::size_t k = 0; k < d_pre.size(); ++k) d_pre.data()[k] *= elu_grad(head.pre.data()[k]);
  const Matrix d_h = matmul_nt(d_pre, params.p1);

  EncoderGradients g = backward_from_embeddings(cache, d_h, params, options);
  if (options.param_grads) {
    g.params.p2 = matmul_tn(head.hidden, grad_projected);
    g.params.b2 = column_sums(grad_projected);
    g.params.p1 = matmul_tn(head.input, d_pre);
    g.params.b1 = column_sums(d_pre);
  }
  return g;
}

}  // namespace ariel
