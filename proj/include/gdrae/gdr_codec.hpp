// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace gdrae {

using MessageIndex = std::uint64_t;

// Returned by GdrCodec::decode when the top-m subset ranks beyond the selected
// message set. Always counts as a block error.
inline constexpr MessageIndex kInvalidCodeword = std::numeric_limits<MessageIndex>::max();

// Exact C(n, k). Throws OverflowError when the result exceeds 2^63 - 1.
std::uint64_t binomial(unsigned n, unsigned k);

// 2^floor(log2 C(M, m)). Requires 1 <= m <= floor(M/2), else DomainError.
std::uint64_t num_messages(unsigned M, unsigned m);

// The index-th m-subset of {0..M-1} in lexicographic order, ascending.
// Valid for index < C(M, m).
std::vector<unsigned> unrank_subset(std::uint64_t index, unsigned M, unsigned m);

// Inverse of unrank_subset. Positions must be strictly increasing and < M.
std::uint64_t rank_subset(std::span<const unsigned> positions, unsigned M, unsigned m);

struct RateFraction {
  std::uint64_t numerator;
  std::uint64_t denominator;
  friend bool operator==(const RateFraction&, const RateFraction&) = default;
};

// m-hot message representation over an M-dimensional vector with n channel
// uses. Message s maps to the s-th lexicographic m-subset, each active entry
// carrying 1/m. Immutable after construction.
class GdrCodec {
 public:
  GdrCodec(unsigned M, unsigned m, unsigned n);

  unsigned vector_size() const noexcept { return M_; }
  unsigned order() const noexcept { return m_; }
  unsigned channel_uses() const noexcept { return n_; }
  std::uint64_t num_messages() const noexcept { return messages_; }
  // floor(log2 C(M, m)): information bits carried per block.
  unsigned bits_per_block() const noexcept { return bits_; }

  std::vector<double> encode(MessageIndex s) const;
  void encode_into(MessageIndex s, std::span<double> out) const;

  // Top-m positions (ties to the lowest index), ranked. Returns
  // kInvalidCodeword if the rank is not a selected message.
  MessageIndex decode(std::span<const double> p) const;

  // Bits per channel use, floor(log2 C(M, m)) / n.
  double data_rate() const noexcept;
  // Same, as a reduced fraction.
  RateFraction data_rate_exact() const noexcept;

 private:
  unsigned M_;
  unsigned m_;
  unsigned n_;
  unsigned bits_;
  std::uint64_t messages_;
};

// Shannon capacity log2(1 + 2 R Eb/N0) in bits/s/Hz at linear Eb/N0.
// Throws DomainError for non-positive Eb/N0.
double capacity(const GdrCodec& codec, double ebn0_linear);

}  // namespace gdrae
