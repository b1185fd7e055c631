// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "gdrae/channel.hpp"
#include "gdrae/error.hpp"

using namespace gdrae;

TEST(NoiseVariance, Examples) {
  EXPECT_DOUBLE_EQ(noise_variance(0.5, 0.0), 1.0);
  EXPECT_NEAR(noise_variance(6.0 / 7.0, 0.0), 7.0 / 12.0, 1e-15);
  EXPECT_NEAR(noise_variance(4.0 / 7.0, 10.0), 0.0875, 1e-15);
  EXPECT_THROW(noise_variance(0.0, 0.0), DomainError);
  EXPECT_THROW(noise_variance(-1.0, 0.0), DomainError);
}

TEST(ChannelSpec, DerivesVariance) {
  const auto spec = ChannelSpec::at(3.0 / 7.0, 2.0);
  EXPECT_EQ(spec.sigma2, noise_variance(3.0 / 7.0, 2.0));
  EXPECT_GT(spec.sigma2, 0.0);
}

TEST(Awgn, ZeroVarianceIsIdentity) {
  RngStream rng(1, 0);
  const std::vector<double> x = {0.5, -1.25, 3.0};
  EXPECT_EQ(awgn(x, 0.0, rng), x);
}

TEST(Awgn, TinyVarianceApproachesIdentity) {
  RngStream rng(1, 0);
  const std::vector<double> x = {0.5, -1.25, 3.0, 1e3};
  const auto y = awgn(x, 1e-20, rng);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_LT(std::abs(y[i] - x[i]), 1e-9);
}

TEST(Awgn, NegativeVarianceRejected) {
  RngStream rng(1, 0);
  EXPECT_THROW(awgn(std::vector<double>{0.0}, -1.0, rng), DomainError);
}

TEST(Awgn, EmpiricalMomentsMillionDraws) {
  RngStream rng(2024, 7);
  const std::vector<double> zeros(1000, 0.0);
  double sum = 0.0, sum2 = 0.0;
  std::size_t count = 0;
  for (int block = 0; block < 1000; ++block) {
    for (double v : awgn(zeros, 1.0, rng)) {
      sum += v;
      sum2 += v * v;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sum2 / static_cast<double>(count) - mean * mean;
  // 3 sigma: 3/sqrt(1e6) = 0.003 for the mean, 3*sqrt(2/1e6) = 0.42% for the variance.
  EXPECT_LT(std::abs(mean), 0.004);
  EXPECT_LT(std::abs(var - 1.0), 0.01);
}

TEST(RngStream, SameSeedAndStreamReplay) {
  RngStream a(99, 3), b(99, 3);
  const std::vector<double> x(50, 1.0);
  EXPECT_EQ(awgn(x, 0.7, a), awgn(x, 0.7, b));
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(99, 3), b(99, 4), c(100, 3);
  const double va = a.normal(), vb = b.normal(), vc = c.normal();
  EXPECT_NE(va, vb);
  EXPECT_NE(va, vc);
}

TEST(RngStream, DistinctStreamsUncorrelated) {
  RngStream a(5, 0), b(5, 1);
  double cross = 0.0;
  constexpr int N = 200000;
  for (int i = 0; i < N; ++i) cross += a.normal() * b.normal();
  // Sample correlation of independent normals has std 1/sqrt(N).
  EXPECT_LT(std::abs(cross / N), 4.0 / std::sqrt(N));
}
