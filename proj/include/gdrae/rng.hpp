// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace gdrae {

// Seeded random stream. Every stochastic draw in the library goes through one
// of these; equal (seed, stream) pairs replay the same sequence within a build.
// Not thread-safe: one consumer per stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  double normal() { return normal_(engine_); }
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  // Uniform on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Stream ids used by the library. Sweep points and study cells add their
// index to the base so each task owns an independent stream.
namespace streams {
inline constexpr std::uint64_t kWeightInit = 1;
inline constexpr std::uint64_t kTrainingMessages = 2;
inline constexpr std::uint64_t kShuffle = 3;
inline constexpr std::uint64_t kTrainingNoise = 4;
inline constexpr std::uint64_t kBlerPointBase = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kMomentSampling = std::uint64_t{2} << 32;
}  // namespace streams

}  // namespace gdrae
