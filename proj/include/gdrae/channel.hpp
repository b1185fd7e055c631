// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "gdrae/matrix.hpp"
#include "gdrae/rng.hpp"

namespace gdrae {

double db_to_linear(double db);

// Per-real-dimension noise variance 1 / (2 R Eb/N0) for a rate R in bits per
// channel use and Eb/N0 in dB. Throws DomainError if R <= 0.
double noise_variance(double rate, double ebn0_db);

struct ChannelSpec {
  double ebn0_db;
  double rate;
  double sigma2;

  static ChannelSpec at(double rate, double ebn0_db) {
    return {ebn0_db, rate, noise_variance(rate, ebn0_db)};
  }
};

// y = x + n with n_j ~ N(0, sigma2) i.i.d.
std::vector<double> awgn(std::span<const double> x, double sigma2, RngStream& rng);
void add_awgn(Matrix& x, double sigma2, RngStream& rng);

}  // namespace gdrae
