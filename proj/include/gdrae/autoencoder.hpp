// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gdrae/gdr_codec.hpp"
#include "gdrae/matrix.hpp"
#include "gdrae/nn.hpp"

namespace gdrae {

struct ModelMeta {
  unsigned M = 0;
  unsigned n = 0;
  unsigned m = 1;
  double trained_ebn0_db = 0.0;
  std::uint64_t seed = 0;
  // Per-block energy normalization x <- x sqrt(n) / |x| after the batch
  // normalization layer. Off by default.
  bool energy_normalization = false;

  friend bool operator==(const ModelMeta&, const ModelMeta&) = default;
};

// Transmitter: M -> M (relu) -> n (linear) -> batch norm.
// Receiver:    n -> M (relu) -> M (softmax).
struct ModelParams {
  DenseLayer tx_dense1;
  DenseLayer tx_dense2;
  BatchNormLayer norm;
  DenseLayer rx_dense;
  DenseLayer rx_out;
  ModelMeta meta;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Trainable parameter counts grouped as: transmitter dense block, normalization
// layer, receiver relu layer, receiver softmax layer.
struct ParamCounts {
  std::size_t dense_block = 0;
  std::size_t normalization = 0;
  std::size_t relu_layer = 0;
  std::size_t softmax_layer = 0;
  std::size_t total = 0;

  friend bool operator==(const ParamCounts&, const ParamCounts&) = default;
};

// Glorot-uniform weights from RngStream(seed, streams::kWeightInit).
ModelParams build_model(unsigned M, unsigned n, std::uint64_t seed);

ParamCounts count_params(const ModelParams& model);

// Inference-mode transmitter (running statistics, model unchanged).
Matrix transmit(const ModelParams& model, const Matrix& messages);
// Train mode normalizes with batch statistics and updates the running ones.
Matrix transmit(ModelParams& model, const Matrix& messages, Mode mode);
std::vector<double> transmit(const ModelParams& model, std::span<const double> message);

Matrix receive(const ModelParams& model, const Matrix& received);
std::vector<double> receive(const ModelParams& model, std::span<const double> received);

// Intermediate values of one train-mode pass, consumed by backward().
struct ForwardCache {
  DenseCache tx_dense1;
  DenseCache tx_dense2;
  BatchNormCache norm;
  Matrix normalized;  // batch-norm output, before energy normalization
  Matrix transmitted;
  DenseCache rx_dense;
  DenseCache rx_out;
  bool complete = false;
};

struct Gradients {
  DenseGrad tx_dense1;
  DenseGrad tx_dense2;
  BatchNormGrad norm;
  DenseGrad rx_dense;
  DenseGrad rx_out;
};

// Train-mode pass messages -> transmit -> (+ noise) -> receive. `noise` has
// shape B x n and is added to the transmitted signal. Returns B x M
// probabilities.
Matrix forward_train(ModelParams& model, const Matrix& messages, const Matrix& noise,
                     ForwardCache& cache);

// Exact gradient of the batch-mean cross-entropy against `targets` for the pass
// recorded in `cache`. Throws StateError if the cache is incomplete.
Gradients backward(const ModelParams& model, const ForwardCache& cache,
                   const Matrix& targets);

// Pairs every trainable tensor of `model` with its gradient, in a fixed order.
std::vector<ParamRef> trainable_params(ModelParams& model, const Gradients& grads);

struct TrainingConfig {
  int epochs = 150;
  std::size_t batch_size = 45;
  std::size_t train_samples = 20000;
  std::size_t test_samples = 1000000;
  double trained_ebn0_db = 0.0;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;

  // Throws DomainError on a count < 1 or a non-positive learning rate.
  void validate() const;
};

struct LossHistory {
  std::vector<double> epoch_loss;  // mean training loss per epoch
  friend bool operator==(const LossHistory&, const LossHistory&) = default;
};

using EpochCallback = std::function<void(int epoch, double loss)>;

// End-to-end training over the AWGN channel at config.trained_ebn0_db with
// fresh noise on every presentation. Throws TrainingDivergedError on a
// non-finite loss or gradient.
LossHistory train(ModelParams& model, const GdrCodec& codec, const TrainingConfig& config,
                  const EpochCallback& on_epoch = {});

// Inference-mode mean square amplitude per channel dimension over every
// message of the codec.
std::vector<double> transmit_power(const ModelParams& model, const GdrCodec& codec);

// All messages of the codec encoded as rows.
Matrix encode_all(const GdrCodec& codec);

}  // namespace gdrae
