// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include "gdrae/channel.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gdrae/error.hpp"

namespace gdrae {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::array<std::uint32_t, 4> words = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double noise_variance(double rate, double ebn0_db) {
  if (!(rate > 0.0)) {
    throw DomainError("noise_variance: rate must be positive, got " + std::to_string(rate));
  }
  return 1.0 / (2.0 * rate * db_to_linear(ebn0_db));
}

namespace {

void require_variance(double sigma2) {
  if (!(sigma2 >= 0.0)) {
    throw DomainError("awgn: noise variance must be >= 0, got " + std::to_string(sigma2));
  }
}

}  // namespace

std::vector<double> awgn(std::span<const double> x, double sigma2, RngStream& rng) {
  require_variance(sigma2);
  std::vector<double> y(x.begin(), x.end());
  if (sigma2 == 0.0) return y;
  const double sigma = std::sqrt(sigma2);
  for (double& v : y) v += sigma * rng.normal();
  return y;
}

void add_awgn(Matrix& x, double sigma2, RngStream& rng) {
  require_variance(sigma2);
  if (sigma2 == 0.0) return;
  const double sigma = std::sqrt(sigma2);
  for (double& v : x.data()) v += sigma * rng.normal();
}

}  // namespace gdrae
