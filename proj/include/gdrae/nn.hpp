// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gdrae/matrix.hpp"
#include "gdrae/rng.hpp"

namespace gdrae {

enum class Activation { identity, relu, softmax };

std::string_view to_string(Activation a);
// Throws DomainError for unknown names.
Activation activation_from_string(std::string_view name);

enum class Mode { train, infer };

// y = activation(W x + b), W stored out x in.
struct DenseLayer {
  Matrix weights;
  std::vector<double> bias;
  Activation activation = Activation::identity;

  DenseLayer() = default;
  DenseLayer(std::size_t inputs, std::size_t outputs, Activation act)
      : weights(outputs, inputs), bias(outputs, 0.0), activation(act) {}

  std::size_t inputs() const noexcept { return weights.cols(); }
  std::size_t outputs() const noexcept { return weights.rows(); }
  std::size_t param_count() const noexcept { return weights.size() + bias.size(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Glorot-uniform weights in [-sqrt(6/(in+out)), +sqrt(6/(in+out))], zero bias.
void glorot_uniform_init(DenseLayer& layer, RngStream& rng);

struct DenseCache {
  Matrix input;
  Matrix pre_activation;
  Matrix output;
};

struct DenseGrad {
  Matrix weights;
  std::vector<double> bias;
};

Matrix dense_forward(const DenseLayer& layer, const Matrix& batch);
Matrix dense_forward(const DenseLayer& layer, const Matrix& batch, DenseCache& cache);

// Backpropagates a gradient taken with respect to the pre-activation values.
// Fills `grad` and returns the gradient with respect to the layer input.
Matrix dense_backward_preactivation(const DenseLayer& layer, const DenseCache& cache,
                                    const Matrix& grad_pre, DenseGrad& grad);

// Same, but `grad_out` is taken with respect to the activated output.
Matrix dense_backward(const DenseLayer& layer, const DenseCache& cache,
                      const Matrix& grad_out, DenseGrad& grad);

// Max-subtracted softmax. Throws InvalidInputError on non-finite input.
std::vector<double> softmax(std::span<const double> v);
void softmax_inplace(std::span<double> v);

struct BatchNormLayer {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double momentum = 0.99;
  double epsilon = 1e-3;

  BatchNormLayer() = default;
  explicit BatchNormLayer(std::size_t features)
      : gamma(features, 1.0),
        beta(features, 0.0),
        running_mean(features, 0.0),
        running_var(features, 1.0) {}

  std::size_t features() const noexcept { return gamma.size(); }
  // Running statistics are not trainable and are not counted.
  std::size_t param_count() const noexcept { return gamma.size() + beta.size(); }

  friend bool operator==(const BatchNormLayer&, const BatchNormLayer&) = default;
};

struct BatchNormCache {
  Matrix normalized;            // x_hat, before gamma/beta
  std::vector<double> inv_std;  // 1/sqrt(var + eps) per feature
};

struct BatchNormGrad {
  std::vector<double> gamma;
  std::vector<double> beta;
};

// Train mode normalizes with the (biased) batch statistics and folds them into
// the running statistics; the running variance uses the unbiased estimate.
// Infer mode is the fixed affine map given by the running statistics.
Matrix batchnorm_forward(BatchNormLayer& layer, const Matrix& batch, Mode mode,
                         BatchNormCache* cache = nullptr);
Matrix batchnorm_forward(const BatchNormLayer& layer, const Matrix& batch);

// Gradient through train-mode batch normalization.
Matrix batchnorm_backward(const BatchNormLayer& layer, const BatchNormCache& cache,
                          const Matrix& grad_out, BatchNormGrad& grad);

inline constexpr double kProbabilityFloor = 1e-30;

struct CrossEntropyDiagnostics {
  // Number of entries where p fell below kProbabilityFloor on the support of s.
  std::size_t clamped = 0;
};

// -sum_i s_i ln p_i.
double cross_entropy(std::span<const double> s, std::span<const double> p,
                     CrossEntropyDiagnostics* diag = nullptr);

double mean_cross_entropy(const Matrix& targets, const Matrix& probs,
                          CrossEntropyDiagnostics* diag = nullptr);

// Gradient of the batch-mean cross-entropy with respect to softmax logits:
// (p - s) / B.
Matrix softmax_cross_entropy_grad(const Matrix& probs, const Matrix& targets);

// A trainable tensor and its gradient, flattened.
struct ParamRef {
  std::string path;
  std::span<double> value;
  std::span<const double> grad;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  explicit AdamState(AdamConfig config = {}) : config_(config) {}

  const AdamConfig& config() const noexcept { return config_; }
  std::int64_t step_count() const noexcept { return step_; }
  const std::vector<std::vector<double>>& first_moment() const noexcept { return m_; }
  const std::vector<std::vector<double>>& second_moment() const noexcept { return v_; }

 private:
  friend void adam_step(std::span<const ParamRef> params, AdamState& state);

  AdamConfig config_;
  std::int64_t step_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

// Bias-corrected Adam update. Accumulators are sized on the first call and
// must match on every later one. A non-finite gradient leaves both params and
// state untouched and throws NonFiniteGradientError.
void adam_step(std::span<const ParamRef> params, AdamState& state);

}  // namespace gdrae
