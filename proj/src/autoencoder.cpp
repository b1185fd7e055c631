// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include "gdrae/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gdrae/channel.hpp"
#include "gdrae/error.hpp"
#include "gdrae/rng.hpp"

namespace gdrae {

namespace {

Matrix energy_normalize(const Matrix& x) {
  Matrix y(x.rows(), x.cols());
  const double scale = std::sqrt(static_cast<double>(x.cols()));
  for (std::size_t b = 0; b < x.rows(); ++b) {
    const auto in = x.row(b);
    auto out = y.row(b);
    double norm2 = 0.0;
    for (double v : in) norm2 += v * v;
    const double k = norm2 > 0.0 ? scale / std::sqrt(norm2) : 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) out[j] = k * in[j];
  }
  return y;
}

// d/dx of x sqrt(n)/|x| applied to g: sqrt(n)/|x| (g - (g.x) x / |x|^2).
Matrix energy_normalize_backward(const Matrix& x, const Matrix& grad_out) {
  Matrix grad(x.rows(), x.cols());
  const double scale = std::sqrt(static_cast<double>(x.cols()));
  for (std::size_t b = 0; b < x.rows(); ++b) {
    const auto in = x.row(b);
    const auto g = grad_out.row(b);
    auto dx = grad.row(b);
    double norm2 = 0.0;
    double dot = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      norm2 += in[j] * in[j];
      dot += g[j] * in[j];
    }
    if (norm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < in.size(); ++j) {
      dx[j] = scale * inv * (g[j] - dot * in[j] / norm2);
    }
  }
  return grad;
}

void require_width(const Matrix& m, std::size_t cols, const char* what) {
  if (m.cols() != cols) {
    throw ShapeError(std::string(what) + ": got " + m.shape_string() + ", expected Bx" +
                     std::to_string(cols));
  }
}

Matrix single_row(std::span<const double> v) {
  return Matrix(1, v.size(), std::vector<double>(v.begin(), v.end()));
}

// Batch boundaries for one epoch. A trailing batch of one sample cannot be
// batch-normalized in train mode, so it joins the previous batch.
std::vector<std::size_t> batch_starts(std::size_t samples, std::size_t batch_size) {
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s < samples; s += batch_size) starts.push_back(s);
  if (starts.size() > 1 && samples - starts.back() == 1) starts.pop_back();
  starts.push_back(samples);
  return starts;
}

}  // namespace

ModelParams build_model(unsigned M, unsigned n, std::uint64_t seed) {
  if (M < 2) throw DomainError("build_model: M must be >= 2, got " + std::to_string(M));
  if (n < 1) throw DomainError("build_model: n must be >= 1, got " + std::to_string(n));
  ModelParams model;
  model.tx_dense1 = DenseLayer(M, M, Activation::relu);
  model.tx_dense2 = DenseLayer(M, n, Activation::identity);
  model.norm = BatchNormLayer(n);
  model.rx_dense = DenseLayer(n, M, Activation::relu);
  model.rx_out = DenseLayer(M, M, Activation::softmax);
  model.meta.M = M;
  model.meta.n = n;
  model.meta.seed = seed;

  RngStream rng(seed, streams::kWeightInit);
  glorot_uniform_init(model.tx_dense1, rng);
  glorot_uniform_init(model.tx_dense2, rng);
  glorot_uniform_init(model.rx_dense, rng);
  glorot_uniform_init(model.rx_out, rng);
  return model;
}

ParamCounts count_params(const ModelParams& model) {
  ParamCounts c;
  c.dense_block = model.tx_dense1.param_count() + model.tx_dense2.param_count();
  c.normalization = model.norm.param_count();
  c.relu_layer = model.rx_dense.param_count();
  c.softmax_layer = model.rx_out.param_count();
  c.total = c.dense_block + c.normalization + c.relu_layer + c.softmax_layer;
  return c;
}

Matrix transmit(const ModelParams& model, const Matrix& messages) {
  require_width(messages, model.meta.M, "transmit");
  Matrix x = batchnorm_forward(model.norm,
                               dense_forward(model.tx_dense2,
                                             dense_forward(model.tx_dense1, messages)));
  return model.meta.energy_normalization ? energy_normalize(x) : x;
}

Matrix transmit(ModelParams& model, const Matrix& messages, Mode mode) {
  if (mode == Mode::infer) return transmit(std::as_const(model), messages);
  require_width(messages, model.meta.M, "transmit");
  Matrix x = batchnorm_forward(
      model.norm,
      dense_forward(model.tx_dense2, dense_forward(model.tx_dense1, messages)), Mode::train);
  return model.meta.energy_normalization ? energy_normalize(x) : x;
}

std::vector<double> transmit(const ModelParams& model, std::span<const double> message) {
  Matrix x = transmit(model, single_row(message));
  return {x.data().begin(), x.data().end()};
}

Matrix receive(const ModelParams& model, const Matrix& received) {
  require_width(received, model.meta.n, "receive");
  return dense_forward(model.rx_out, dense_forward(model.rx_dense, received));
}

std::vector<double> receive(const ModelParams& model, std::span<const double> received) {
  Matrix p = receive(model, single_row(received));
  return {p.data().begin(), p.data().end()};
}

Matrix forward_train(ModelParams& model, const Matrix& messages, const Matrix& noise,
                     ForwardCache& cache) {
  require_width(messages, model.meta.M, "forward_train");
  if (noise.rows() != messages.rows() || noise.cols() != model.meta.n) {
    throw ShapeError("forward_train: noise " + noise.shape_string() + " vs expected " +
                     std::to_string(messages.rows()) + "x" + std::to_string(model.meta.n));
  }
  cache.complete = false;
  dense_forward(model.tx_dense1, messages, cache.tx_dense1);
  dense_forward(model.tx_dense2, cache.tx_dense1.output, cache.tx_dense2);
  cache.normalized =
      batchnorm_forward(model.norm, cache.tx_dense2.output, Mode::train, &cache.norm);
  cache.transmitted = model.meta.energy_normalization ? energy_normalize(cache.normalized)
                                                      : cache.normalized;
  Matrix received = cache.transmitted;
  auto y = received.data();
  const auto w = noise.data();
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += w[k];
  dense_forward(model.rx_dense, received, cache.rx_dense);
  dense_forward(model.rx_out, cache.rx_dense.output, cache.rx_out);
  cache.complete = true;
  return cache.rx_out.output;
}

Gradients backward(const ModelParams& model, const ForwardCache& cache,
                   const Matrix& targets) {
  if (!cache.complete) throw StateError("backward: no completed forward pass");
  if (model.rx_out.activation != Activation::softmax) {
    throw StateError("backward: output layer must be softmax");
  }
  Gradients g;
  // Softmax and cross-entropy fused at the logits.
  Matrix grad = softmax_cross_entropy_grad(cache.rx_out.output, targets);
  grad = dense_backward_preactivation(model.rx_out, cache.rx_out, grad, g.rx_out);
  grad = dense_backward(model.rx_dense, cache.rx_dense, grad, g.rx_dense);
  // Additive noise passes the gradient through unchanged.
  if (model.meta.energy_normalization) grad = energy_normalize_backward(cache.normalized, grad);
  grad = batchnorm_backward(model.norm, cache.norm, grad, g.norm);
  grad = dense_backward(model.tx_dense2, cache.tx_dense2, grad, g.tx_dense2);
  dense_backward(model.tx_dense1, cache.tx_dense1, grad, g.tx_dense1);
  return g;
}

std::vector<ParamRef> trainable_params(ModelParams& model, const Gradients& grads) {
  return {
      {"tx_dense1.weights", model.tx_dense1.weights.data(), grads.tx_dense1.weights.data()},
      {"tx_dense1.bias", model.tx_dense1.bias, grads.tx_dense1.bias},
      {"tx_dense2.weights", model.tx_dense2.weights.data(), grads.tx_dense2.weights.data()},
      {"tx_dense2.bias", model.tx_dense2.bias, grads.tx_dense2.bias},
      {"norm.gamma", model.norm.gamma, grads.norm.gamma},
      {"norm.beta", model.norm.beta, grads.norm.beta},
      {"rx_dense.weights", model.rx_dense.weights.data(), grads.rx_dense.weights.data()},
      {"rx_dense.bias", model.rx_dense.bias, grads.rx_dense.bias},
      {"rx_out.weights", model.rx_out.weights.data(), grads.rx_out.weights.data()},
      {"rx_out.bias", model.rx_out.bias, grads.rx_out.bias},
  };
}

void TrainingConfig::validate() const {
  if (epochs < 1) throw DomainError("epochs must be >= 1");
  if (batch_size < 2) throw DomainError("batch size must be >= 2 for batch normalization");
  if (train_samples < 2) throw DomainError("train samples must be >= 2");
  if (test_samples < 1) throw DomainError("test samples must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw DomainError("learning rate must be positive and finite");
  }
  if (!std::isfinite(trained_ebn0_db)) throw DomainError("trained Eb/N0 must be finite");
}

LossHistory train(ModelParams& model, const GdrCodec& codec, const TrainingConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  if (codec.vector_size() != model.meta.M || codec.channel_uses() != model.meta.n) {
    throw ShapeError("train: codec (M=" + std::to_string(codec.vector_size()) +
                     ", n=" + std::to_string(codec.channel_uses()) + ") does not match model (M=" +
                     std::to_string(model.meta.M) + ", n=" + std::to_string(model.meta.n) + ")");
  }
  model.meta.m = codec.order();
  model.meta.trained_ebn0_db = config.trained_ebn0_db;

  const unsigned M = codec.vector_size();
  const unsigned n = codec.channel_uses();
  const double sigma = std::sqrt(noise_variance(codec.data_rate(), config.trained_ebn0_db));

  RngStream message_rng(config.seed, streams::kTrainingMessages);
  RngStream shuffle_rng(config.seed, streams::kShuffle);
  RngStream noise_rng(config.seed, streams::kTrainingNoise);

  std::vector<MessageIndex> dataset(config.train_samples);
  for (auto& s : dataset) s = message_rng.uniform_index(codec.num_messages());
  // Encoded rows for every message, looked up per batch.
  const Matrix codebook = encode_all(codec);

  AdamState adam(AdamConfig{.learning_rate = config.learning_rate});
  ForwardCache cache;
  const auto starts = batch_starts(dataset.size(), config.batch_size);

  LossHistory history;
  history.epoch_loss.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(dataset.begin(), dataset.end(), shuffle_rng.engine());
    double loss_sum = 0.0;
    for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
      const std::size_t rows = starts[k + 1] - starts[k];
      Matrix targets(rows, M);
      for (std::size_t r = 0; r < rows; ++r) {
        const auto src = codebook.row(dataset[starts[k] + r]);
        std::copy(src.begin(), src.end(), targets.row(r).begin());
      }
      Matrix noise(rows, n);
      for (double& v : noise.data()) v = sigma * noise_rng.normal();

      Matrix probs;
      try {
        probs = forward_train(model, targets, noise, cache);
      } catch (const InvalidInputError&) {
        throw TrainingDivergedError(epoch);
      }
      const double loss = mean_cross_entropy(targets, probs);
      if (!std::isfinite(loss)) throw TrainingDivergedError(epoch);
      loss_sum += loss * static_cast<double>(rows);

      const Gradients grads = backward(model, cache, targets);
      const auto params = trainable_params(model, grads);
      try {
        adam_step(params, adam);
      } catch (const NonFiniteGradientError&) {
        throw TrainingDivergedError(epoch);
      }
    }
    const double epoch_loss = loss_sum / static_cast<double>(dataset.size());
    history.epoch_loss.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  return history;
}

Matrix encode_all(const GdrCodec& codec) {
  Matrix all(codec.num_messages(), codec.vector_size());
  for (MessageIndex s = 0; s < codec.num_messages(); ++s) codec.encode_into(s, all.row(s));
  return all;
}

std::vector<double> transmit_power(const ModelParams& model, const GdrCodec& codec) {
  const Matrix x = transmit(model, encode_all(codec));
  std::vector<double> power(x.cols(), 0.0);
  for (std::size_t b = 0; b < x.rows(); ++b) {
    const auto row = x.row(b);
    for (std::size_t j = 0; j < row.size(); ++j) power[j] += row[j] * row[j];
  }
  for (double& p : power) p /= static_cast<double>(x.rows());
  return power;
}

}  // namespace gdrae
