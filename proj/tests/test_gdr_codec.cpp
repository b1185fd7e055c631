// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gdrae/error.hpp"
#include "gdrae/gdr_codec.hpp"
#include "oracles.hpp"

using namespace gdrae;

TEST(Binomial, AgreesWithPascal) {
  for (unsigned n = 0; n <= 60; ++n) {
    for (unsigned k = 0; k <= n; ++k) EXPECT_EQ(binomial(n, k), oracle::pascal_binomial(n, k));
  }
}

TEST(Binomial, OverflowIsReported) {
  EXPECT_NO_THROW(binomial(64, 4));
  EXPECT_THROW(binomial(200, 100), OverflowError);
}

TEST(NumMessages, Examples) {
  EXPECT_EQ(num_messages(64, 1), 64u);
  EXPECT_EQ(num_messages(8, 4), 64u);   // C(8,4) = 70
  EXPECT_EQ(num_messages(8, 2), 16u);   // C(8,2) = 28
  EXPECT_EQ(num_messages(16, 2), 64u);  // C(16,2) = 120
}

TEST(NumMessages, OrderOutOfRange) {
  EXPECT_THROW(num_messages(8, 0), DomainError);
  EXPECT_THROW(num_messages(8, 5), DomainError);
  EXPECT_THROW(num_messages(3, 2), DomainError);
}

TEST(NumMessages, OneHotReducesToPowerOfTwoBelowM) {
  for (unsigned M = 2; M <= 64; ++M) {
    EXPECT_EQ(num_messages(M, 1), std::uint64_t{1} << static_cast<unsigned>(std::floor(std::log2(M))));
  }
}

TEST(Subsets, UnrankExamples) {
  EXPECT_EQ(unrank_subset(0, 4, 2), (std::vector<unsigned>{0, 1}));
  EXPECT_EQ(unrank_subset(3, 4, 2), (std::vector<unsigned>{1, 2}));
  EXPECT_EQ(unrank_subset(5, 4, 2), (std::vector<unsigned>{2, 3}));
  EXPECT_THROW(unrank_subset(6, 4, 2), DomainError);
}

TEST(Subsets, RankExamples) {
  EXPECT_EQ(rank_subset(std::vector<unsigned>{0, 1}, 4, 2), 0u);
  EXPECT_EQ(rank_subset(std::vector<unsigned>{1, 2}, 4, 2), 3u);
  EXPECT_EQ(rank_subset(std::vector<unsigned>{2, 3}, 4, 2), 5u);
}

TEST(Subsets, RankRejectsBadInput) {
  EXPECT_THROW(rank_subset(std::vector<unsigned>{2, 1}, 4, 2), DomainError);
  EXPECT_THROW(rank_subset(std::vector<unsigned>{1, 1}, 4, 2), DomainError);
  EXPECT_THROW(rank_subset(std::vector<unsigned>{1, 4}, 4, 2), DomainError);
  EXPECT_THROW(rank_subset(std::vector<unsigned>{1}, 4, 2), DomainError);
}

// Both directions against the recursive lexicographic enumeration.
TEST(Subsets, ExhaustiveAgainstEnumerationUpTo16) {
  for (unsigned M = 1; M <= 16; ++M) {
    for (unsigned m = 0; m <= M; ++m) {
      const auto all = oracle::all_subsets(M, m);
      ASSERT_EQ(all.size(), binomial(M, m));
      for (std::uint64_t i = 0; i < all.size(); ++i) {
        ASSERT_EQ(unrank_subset(i, M, m), all[i]) << "M=" << M << " m=" << m << " i=" << i;
        ASSERT_EQ(rank_subset(all[i], M, m), i);
      }
    }
  }
}

TEST(Encode, Examples) {
  EXPECT_EQ(GdrCodec(8, 1, 7).encode(1), (std::vector<double>{0, 1, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(GdrCodec(4, 2, 7).encode(3), (std::vector<double>{0, 0.5, 0.5, 0}));
  EXPECT_EQ(GdrCodec(8, 4, 7).encode(0), (std::vector<double>{0.25, 0.25, 0.25, 0.25, 0, 0, 0, 0}));
  EXPECT_THROW(GdrCodec(4, 2, 7).encode(4), DomainError);
}

TEST(Decode, Examples) {
  const GdrCodec codec(4, 2, 7);
  EXPECT_EQ(codec.decode(std::vector<double>{0.1, 0.35, 0.4, 0.15}), 3u);
  EXPECT_EQ(codec.decode(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 0u);
  // {2,3} has rank 5 >= num_messages(4,2) = 4.
  EXPECT_EQ(codec.decode(std::vector<double>{0.1, 0.1, 0.4, 0.4}), kInvalidCodeword);
}

TEST(Codec, ExhaustiveRoundTripAndShapeUpTo16) {
  for (unsigned M = 2; M <= 16; ++M) {
    for (unsigned m = 1; m <= M / 2; ++m) {
      const GdrCodec codec(M, m, 7);
      for (MessageIndex s = 0; s < codec.num_messages(); ++s) {
        const auto v = codec.encode(s);
        ASSERT_EQ(codec.decode(v), s) << "M=" << M << " m=" << m << " s=" << s;
        EXPECT_DOUBLE_EQ(std::accumulate(v.begin(), v.end(), 0.0), 1.0);
        unsigned nonzero = 0;
        for (double x : v) {
          if (x != 0.0) {
            ++nonzero;
            EXPECT_EQ(x, 1.0 / m);
          }
        }
        EXPECT_EQ(nonzero, m);
      }
    }
  }
}

TEST(DataRate, Examples) {
  EXPECT_EQ(GdrCodec(64, 1, 7).data_rate_exact(), (RateFraction{6, 7}));
  EXPECT_EQ(GdrCodec(8, 4, 7).data_rate_exact(), (RateFraction{6, 7}));
  EXPECT_EQ(GdrCodec(8, 1, 7).data_rate_exact(), (RateFraction{3, 7}));
  EXPECT_EQ(GdrCodec(8, 2, 8).data_rate_exact(), (RateFraction{1, 2}));
  EXPECT_DOUBLE_EQ(GdrCodec(8, 4, 7).data_rate(), 6.0 / 7.0);
}

TEST(DataRate, NonDecreasingInOrder) {
  for (unsigned M = 2; M <= 40; ++M) {
    double prev = 0.0;
    for (unsigned m = 1; m <= M / 2; ++m) {
      const double r = GdrCodec(M, m, 7).data_rate();
      EXPECT_GE(r, prev) << "M=" << M << " m=" << m;
      prev = r;
    }
  }
}

TEST(Capacity, Examples) {
  // mpmath: log2(1 + 2k/7)
  EXPECT_NEAR(capacity(GdrCodec(8, 4, 7), 1.0), 1.4405725913859814, 1e-12);
  EXPECT_NEAR(capacity(GdrCodec(8, 1, 7), 1.0), 0.89308479608348805, 1e-12);
  for (double e : {0.1, 1.0, 3.7, 100.0}) {
    EXPECT_EQ(capacity(GdrCodec(16, 1, 7), e), capacity(GdrCodec(8, 2, 7), e));
  }
  EXPECT_THROW(capacity(GdrCodec(8, 1, 7), 0.0), DomainError);
  EXPECT_THROW(capacity(GdrCodec(8, 1, 7), -1.0), DomainError);
}
