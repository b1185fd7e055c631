// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include "gdrae/gdr_codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "gdrae/error.hpp"

namespace gdrae {

namespace {

constexpr std::uint64_t kMaxExact = std::numeric_limits<std::int64_t>::max();

void require_order(unsigned M, unsigned m) {
  if (m < 1 || m > M / 2) {
    throw DomainError("order m=" + std::to_string(m) +
                      " out of range: need 1 <= m <= floor(M/2) = " + std::to_string(M / 2) +
                      " for M=" + std::to_string(M));
  }
}

// Number of m-subsets of {0..M-1} that start with `first`, given the
// remaining `left` elements are drawn from the positions after it.
std::uint64_t subsets_starting_at(unsigned M, unsigned first, unsigned left) {
  return binomial(M - first - 1, left);
}

}  // namespace

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i; cancel first to stay in range.
    const std::uint64_t g = std::gcd<std::uint64_t, std::uint64_t>(result, i);
    const std::uint64_t factor = (n - k + i) / (i / g);
    result /= g;
    if (result > kMaxExact / factor) {
      throw OverflowError("C(" + std::to_string(n) + "," + std::to_string(k) +
                          ") exceeds 2^63-1");
    }
    result *= factor;
  }
  return result;
}

std::uint64_t num_messages(unsigned M, unsigned m) {
  require_order(M, m);
  return std::bit_floor(binomial(M, m));
}

std::vector<unsigned> unrank_subset(std::uint64_t index, unsigned M, unsigned m) {
  if (m > M) throw DomainError("unrank_subset: m > M");
  const std::uint64_t total = binomial(M, m);
  if (index >= total) {
    throw DomainError("unrank_subset: index " + std::to_string(index) +
                      " out of range [0, " + std::to_string(total) + ")");
  }
  std::vector<unsigned> positions;
  positions.reserve(m);
  unsigned candidate = 0;
  for (unsigned slot = 0; slot < m; ++slot) {
    const unsigned left = m - slot - 1;
    for (;; ++candidate) {
      const std::uint64_t block = subsets_starting_at(M, candidate, left);
      if (index < block) break;
      index -= block;
    }
    positions.push_back(candidate++);
  }
  return positions;
}

std::uint64_t rank_subset(std::span<const unsigned> positions, unsigned M, unsigned m) {
  if (positions.size() != m) {
    throw DomainError("rank_subset: expected " + std::to_string(m) + " positions, got " +
                      std::to_string(positions.size()));
  }
  std::uint64_t index = 0;
  unsigned candidate = 0;
  for (unsigned slot = 0; slot < m; ++slot) {
    const unsigned p = positions[slot];
    if (p >= M) {
      throw DomainError("rank_subset: position " + std::to_string(p) + " >= M=" +
                        std::to_string(M));
    }
    if (slot > 0 && p <= positions[slot - 1]) {
      throw DomainError("rank_subset: positions must be strictly increasing");
    }
    const unsigned left = m - slot - 1;
    for (; candidate < p; ++candidate) index += subsets_starting_at(M, candidate, left);
    ++candidate;
  }
  return index;
}

GdrCodec::GdrCodec(unsigned M, unsigned m, unsigned n) : M_(M), m_(m), n_(n) {
  require_order(M, m);
  if (n < 1) throw DomainError("channel uses n must be >= 1");
  messages_ = gdrae::num_messages(M, m);
  bits_ = static_cast<unsigned>(std::bit_width(messages_) - 1);
}

std::vector<double> GdrCodec::encode(MessageIndex s) const {
  std::vector<double> out(M_);
  encode_into(s, out);
  return out;
}

void GdrCodec::encode_into(MessageIndex s, std::span<double> out) const {
  if (s >= messages_) {
    throw DomainError("encode: message " + std::to_string(s) + " out of range [0, " +
                      std::to_string(messages_) + ")");
  }
  if (out.size() != M_) {
    throw ShapeError("encode: output length " + std::to_string(out.size()) + " vs M=" +
                     std::to_string(M_));
  }
  std::fill(out.begin(), out.end(), 0.0);
  const double weight = 1.0 / static_cast<double>(m_);
  for (unsigned pos : unrank_subset(s, M_, m_)) out[pos] = weight;
}

MessageIndex GdrCodec::decode(std::span<const double> p) const {
  if (p.size() != M_) {
    throw ShapeError("decode: probability length " + std::to_string(p.size()) + " vs M=" +
                     std::to_string(M_));
  }
  std::vector<unsigned> order(M_);
  std::iota(order.begin(), order.end(), 0u);
  std::partial_sort(order.begin(), order.begin() + m_, order.end(),
                    [&](unsigned a, unsigned b) {
                      if (p[a] != p[b]) return p[a] > p[b];
                      return a < b;
                    });
  order.resize(m_);
  std::sort(order.begin(), order.end());
  const std::uint64_t rank = rank_subset(order, M_, m_);
  return rank < messages_ ? rank : kInvalidCodeword;
}

double GdrCodec::data_rate() const noexcept {
  return static_cast<double>(bits_) / static_cast<double>(n_);
}

RateFraction GdrCodec::data_rate_exact() const noexcept {
  const std::uint64_t g = std::gcd<std::uint64_t, std::uint64_t>(bits_, n_);
  return {bits_ / g, n_ / g};
}

double capacity(const GdrCodec& codec, double ebn0_linear) {
  if (!(ebn0_linear > 0.0)) {
    throw DomainError("capacity: Eb/N0 must be positive, got " + std::to_string(ebn0_linear));
  }
  return std::log2(1.0 + 2.0 * ebn0_linear * codec.data_rate());
}

}  // namespace gdrae
