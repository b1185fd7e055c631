// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include "gdrae/nn.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gdrae/error.hpp"

namespace gdrae {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, std::string_view what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shapes " + a.shape_string() + " and " +
                     b.shape_string() + " differ");
  }
}

void apply_activation(Activation act, Matrix& m) {
  switch (act) {
    case Activation::identity:
      break;
    case Activation::relu:
      for (double& v : m.data()) v = v > 0.0 ? v : 0.0;
      break;
    case Activation::softmax:
      for (std::size_t r = 0; r < m.rows(); ++r) softmax_inplace(m.row(r));
      break;
  }
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::identity:
      return "identity";
    case Activation::relu:
      return "relu";
    case Activation::softmax:
      return "softmax";
  }
  return "?";
}

Activation activation_from_string(std::string_view name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "softmax") return Activation::softmax;
  throw DomainError("unknown activation '" + std::string(name) + "'");
}

void glorot_uniform_init(DenseLayer& layer, RngStream& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(layer.inputs() + layer.outputs()));
  for (double& w : layer.weights.data()) w = rng.uniform(-limit, limit);
  std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
}

namespace {

Matrix affine(const DenseLayer& layer, const Matrix& batch) {
  if (batch.cols() != layer.inputs()) {
    throw ShapeError("dense_forward: batch " + batch.shape_string() +
                     " incompatible with weights " + layer.weights.shape_string());
  }
  const std::size_t in = layer.inputs();
  const std::size_t out = layer.outputs();
  Matrix result(batch.rows(), out);
  for (std::size_t b = 0; b < batch.rows(); ++b) {
    const auto x = batch.row(b);
    auto y = result.row(b);
    for (std::size_t o = 0; o < out; ++o) {
      const auto w = layer.weights.row(o);
      double acc = layer.bias[o];
      for (std::size_t i = 0; i < in; ++i) acc += w[i] * x[i];
      y[o] = acc;
    }
  }
  return result;
}

}  // namespace

Matrix dense_forward(const DenseLayer& layer, const Matrix& batch) {
  Matrix out = affine(layer, batch);
  apply_activation(layer.activation, out);
  return out;
}

Matrix dense_forward(const DenseLayer& layer, const Matrix& batch, DenseCache& cache) {
  cache.pre_activation = affine(layer, batch);
  cache.output = cache.pre_activation;
  apply_activation(layer.activation, cache.output);
  cache.input = batch;
  return cache.output;
}

Matrix dense_backward_preactivation(const DenseLayer& layer, const DenseCache& cache,
                                    const Matrix& grad_pre, DenseGrad& grad) {
  if (cache.input.rows() == 0 && cache.input.cols() == 0) {
    throw StateError("dense_backward: no forward cache");
  }
  require_same_shape(grad_pre, cache.pre_activation, "dense_backward");
  const std::size_t in = layer.inputs();
  const std::size_t out = layer.outputs();
  grad.weights = Matrix(out, in);
  grad.bias.assign(out, 0.0);
  Matrix grad_in(cache.input.rows(), in);
  for (std::size_t b = 0; b < cache.input.rows(); ++b) {
    const auto x = cache.input.row(b);
    const auto g = grad_pre.row(b);
    auto dx = grad_in.row(b);
    for (std::size_t o = 0; o < out; ++o) {
      const double go = g[o];
      if (go == 0.0) continue;
      grad.bias[o] += go;
      auto dw = grad.weights.row(o);
      const auto w = layer.weights.row(o);
      for (std::size_t i = 0; i < in; ++i) {
        dw[i] += go * x[i];
        dx[i] += go * w[i];
      }
    }
  }
  return grad_in;
}

Matrix dense_backward(const DenseLayer& layer, const DenseCache& cache,
                      const Matrix& grad_out, DenseGrad& grad) {
  require_same_shape(grad_out, cache.output, "dense_backward");
  Matrix grad_pre = grad_out;
  switch (layer.activation) {
    case Activation::identity:
      break;
    case Activation::relu: {
      auto g = grad_pre.data();
      const auto pre = cache.pre_activation.data();
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (!(pre[k] > 0.0)) g[k] = 0.0;
      }
      break;
    }
    case Activation::softmax:
      for (std::size_t b = 0; b < grad_pre.rows(); ++b) {
        const auto p = cache.output.row(b);
        auto g = grad_pre.row(b);
        double dot = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) dot += g[k] * p[k];
        for (std::size_t k = 0; k < g.size(); ++k) g[k] = p[k] * (g[k] - dot);
      }
      break;
  }
  return dense_backward_preactivation(layer, cache, grad_pre, grad);
}

void softmax_inplace(std::span<double> v) {
  if (v.empty()) return;
  double peak = v[0];
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidInputError("softmax: non-finite input");
    peak = std::max(peak, x);
  }
  double total = 0.0;
  for (double& x : v) {
    x = std::exp(x - peak);
    total += x;
  }
  for (double& x : v) x /= total;
}

std::vector<double> softmax(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  softmax_inplace(out);
  return out;
}

Matrix batchnorm_forward(BatchNormLayer& layer, const Matrix& batch, Mode mode,
                         BatchNormCache* cache) {
  const std::size_t n = layer.features();
  if (batch.cols() != n) {
    throw ShapeError("batchnorm_forward: batch " + batch.shape_string() +
                     " has wrong feature count, expected " + std::to_string(n));
  }
  if (mode == Mode::infer) return batchnorm_forward(std::as_const(layer), batch);

  const std::size_t rows = batch.rows();
  if (rows < 2) {
    throw BatchTooSmallError("batchnorm_forward: train mode needs at least 2 rows, got " +
                             std::to_string(rows));
  }
  const double count = static_cast<double>(rows);
  std::vector<double> mean(n, 0.0);
  std::vector<double> var(n, 0.0);
  for (std::size_t b = 0; b < rows; ++b) {
    const auto x = batch.row(b);
    for (std::size_t j = 0; j < n; ++j) mean[j] += x[j];
  }
  for (double& m : mean) m /= count;
  for (std::size_t b = 0; b < rows; ++b) {
    const auto x = batch.row(b);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = x[j] - mean[j];
      var[j] += d * d;
    }
  }
  for (double& v : var) v /= count;

  std::vector<double> inv_std(n);
  for (std::size_t j = 0; j < n; ++j) inv_std[j] = 1.0 / std::sqrt(var[j] + layer.epsilon);

  Matrix normalized(rows, n);
  Matrix out(rows, n);
  for (std::size_t b = 0; b < rows; ++b) {
    const auto x = batch.row(b);
    auto xh = normalized.row(b);
    auto y = out.row(b);
    for (std::size_t j = 0; j < n; ++j) {
      xh[j] = (x[j] - mean[j]) * inv_std[j];
      y[j] = layer.gamma[j] * xh[j] + layer.beta[j];
    }
  }

  const double unbias = count / (count - 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    layer.running_mean[j] =
        layer.momentum * layer.running_mean[j] + (1.0 - layer.momentum) * mean[j];
    layer.running_var[j] =
        layer.momentum * layer.running_var[j] + (1.0 - layer.momentum) * var[j] * unbias;
  }

  if (cache != nullptr) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
  }
  return out;
}

Matrix batchnorm_forward(const BatchNormLayer& layer, const Matrix& batch) {
  const std::size_t n = layer.features();
  if (batch.cols() != n) {
    throw ShapeError("batchnorm_forward: batch " + batch.shape_string() +
                     " has wrong feature count, expected " + std::to_string(n));
  }
  std::vector<double> scale(n);
  std::vector<double> shift(n);
  for (std::size_t j = 0; j < n; ++j) {
    scale[j] = layer.gamma[j] / std::sqrt(layer.running_var[j] + layer.epsilon);
    shift[j] = layer.beta[j] - scale[j] * layer.running_mean[j];
  }
  Matrix out(batch.rows(), n);
  for (std::size_t b = 0; b < batch.rows(); ++b) {
    const auto x = batch.row(b);
    auto y = out.row(b);
    for (std::size_t j = 0; j < n; ++j) y[j] = scale[j] * x[j] + shift[j];
  }
  return out;
}

Matrix batchnorm_backward(const BatchNormLayer& layer, const BatchNormCache& cache,
                          const Matrix& grad_out, BatchNormGrad& grad) {
  if (cache.inv_std.empty()) throw StateError("batchnorm_backward: no forward cache");
  require_same_shape(grad_out, cache.normalized, "batchnorm_backward");
  const std::size_t rows = grad_out.rows();
  const std::size_t n = layer.features();
  const double count = static_cast<double>(rows);

  grad.gamma.assign(n, 0.0);
  grad.beta.assign(n, 0.0);
  for (std::size_t b = 0; b < rows; ++b) {
    const auto g = grad_out.row(b);
    const auto xh = cache.normalized.row(b);
    for (std::size_t j = 0; j < n; ++j) {
      grad.gamma[j] += g[j] * xh[j];
      grad.beta[j] += g[j];
    }
  }

  // With dxh = g * gamma:
  //   dx = inv_std / B * (B dxh - sum(dxh) - xh * sum(dxh * xh))
  Matrix grad_in(rows, n);
  for (std::size_t b = 0; b < rows; ++b) {
    const auto g = grad_out.row(b);
    const auto xh = cache.normalized.row(b);
    auto dx = grad_in.row(b);
    for (std::size_t j = 0; j < n; ++j) {
      const double gamma = layer.gamma[j];
      dx[j] = cache.inv_std[j] / count *
              (count * g[j] * gamma - grad.beta[j] * gamma - xh[j] * grad.gamma[j] * gamma);
    }
  }
  return grad_in;
}

double cross_entropy(std::span<const double> s, std::span<const double> p,
                     CrossEntropyDiagnostics* diag) {
  if (s.size() != p.size()) {
    throw ShapeError("cross_entropy: target length " + std::to_string(s.size()) +
                     " vs probability length " + std::to_string(p.size()));
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0.0) continue;
    double pi = p[i];
    if (pi < kProbabilityFloor) {
      pi = kProbabilityFloor;
      if (diag != nullptr) ++diag->clamped;
    }
    loss -= s[i] * std::log(pi);
  }
  return loss;
}

double mean_cross_entropy(const Matrix& targets, const Matrix& probs,
                          CrossEntropyDiagnostics* diag) {
  require_same_shape(targets, probs, "mean_cross_entropy");
  if (targets.rows() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t b = 0; b < targets.rows(); ++b) {
    total += cross_entropy(targets.row(b), probs.row(b), diag);
  }
  return total / static_cast<double>(targets.rows());
}

Matrix softmax_cross_entropy_grad(const Matrix& probs, const Matrix& targets) {
  require_same_shape(targets, probs, "softmax_cross_entropy_grad");
  Matrix grad(probs.rows(), probs.cols());
  const double inv_batch = 1.0 / static_cast<double>(probs.rows());
  const auto p = probs.data();
  const auto s = targets.data();
  auto g = grad.data();
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = (p[k] - s[k]) * inv_batch;
  return grad;
}

void adam_step(std::span<const ParamRef> params, AdamState& state) {
  for (const auto& p : params) {
    if (p.value.size() != p.grad.size()) {
      throw ShapeError("adam_step: parameter '" + p.path + "' has " +
                       std::to_string(p.value.size()) + " entries but gradient has " +
                       std::to_string(p.grad.size()));
    }
    for (double g : p.grad) {
      if (!std::isfinite(g)) throw NonFiniteGradientError(p.path);
    }
  }
  if (state.m_.empty()) {
    state.m_.reserve(params.size());
    state.v_.reserve(params.size());
    for (const auto& p : params) {
      state.m_.emplace_back(p.value.size(), 0.0);
      state.v_.emplace_back(p.value.size(), 0.0);
    }
  } else {
    if (state.m_.size() != params.size()) {
      throw ShapeError("adam_step: state tracks " + std::to_string(state.m_.size()) +
                       " tensors, got " + std::to_string(params.size()));
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (state.m_[k].size() != params[k].value.size()) {
        throw ShapeError("adam_step: state for '" + params[k].path + "' has " +
                         std::to_string(state.m_[k].size()) + " entries, parameter has " +
                         std::to_string(params[k].value.size()));
      }
    }
  }

  const AdamConfig& c = state.config_;
  ++state.step_;
  const double t = static_cast<double>(state.step_);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto value = params[k].value;
    const auto grad = params[k].grad;
    auto& m = state.m_[k];
    auto& v = state.v_[k];
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i];
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

}  // namespace gdrae
