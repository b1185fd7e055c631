// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gdrae/autoencoder.hpp"
#include "gdrae/gdr_codec.hpp"
#include "gdrae/matrix.hpp"
#include "gdrae/rng.hpp"

namespace gdrae {

// Inclusive grid min, min+step, ... up to max (with a 1e-9 step-relative
// slack for accumulated rounding). Empty when min > max. Points are computed
// as min + k*step, not by repeated addition.
std::vector<double> db_grid(double min_db, double max_db, double step_db);

struct BlerRecord {
  double ebn0_db = 0.0;
  std::uint64_t blocks_sent = 0;
  std::uint64_t block_errors = 0;
  double bler = 0.0;
};

struct BlerOptions {
  // Replaces the Eb/N0-derived noise variance at every point.
  std::optional<double> sigma2_override;
  // Worker threads. Results do not depend on this.
  unsigned jobs = 1;
};

// Monte Carlo block error rate of `model` at each grid point. Point k draws
// messages and noise from RngStream(seed, streams::kBlerPointBase + k).
// Throws DomainError for blocks_per_point < 1000, ShapeError when model and
// codec disagree, StateError for a model with non-finite parameters.
std::vector<BlerRecord> bler_sweep(const ModelParams& model, const GdrCodec& codec,
                                   std::span<const double> ebn0_grid_db,
                                   std::uint64_t blocks_per_point, std::uint64_t seed,
                                   const BlerOptions& options = {});

// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval95(std::uint64_t errors, std::uint64_t trials);

// Trains one model per trained Eb/N0, all from the same initialization
// build_model(M, n, config.seed) and otherwise identical configuration.
// Histories are returned in list order.
std::vector<LossHistory> trained_snr_study(unsigned M, unsigned m, unsigned n,
                                           std::span<const double> trained_ebn0_db,
                                           const TrainingConfig& config, unsigned jobs = 1);

struct CapacityPoint {
  double ebn0_db;
  double capacity;
};

std::vector<CapacityPoint> capacity_table(const GdrCodec& codec,
                                          std::span<const double> ebn0_grid_db);

// u = A (x + n) with A of shape M x n; the receiver nonlinearity and bias are
// deliberately not part of the map.
struct LinearReceiverMap {
  Matrix A;
};

// The receiver's first dense layer weights, bias and ReLU dropped.
LinearReceiverMap receiver_linear_map(const ModelParams& model);

struct ElementMoments {
  double e_u = 0.0;    // a_i x
  double d_u = 0.0;    // sigma2 a_i a_i^T
  double e_exp = 0.0;  // E e^{u_i}
  double d_exp = 0.0;  // Var e^{u_i}
  std::optional<double> emp_e_exp;
  std::optional<double> emp_d_exp;
  // Samples where e^{u_i} overflowed and were left out of the empirical moments.
  std::uint64_t overflowed = 0;
};

struct MomentReport {
  std::vector<ElementMoments> elements;
  std::uint64_t samples = 0;  // 0 when no Monte Carlo ran
};

// Closed-form normal moments of u_i and log-normal moments of e^{u_i}.
MomentReport snr_moments(const LinearReceiverMap& map, std::span<const double> x,
                         double sigma2);

// snr_moments plus sample mean and (unbiased) variance of e^{u_i} over N
// noise draws. Requires N >= 10^4.
MomentReport snr_moments_mc(const LinearReceiverMap& map, std::span<const double> x,
                            double sigma2, std::uint64_t samples, RngStream& rng);

}  // namespace gdrae
