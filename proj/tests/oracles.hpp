// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations used only by the tests. Nothing here calls into the
// code paths it is used to check.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace gdrae::oracle {

// Pascal's triangle, exact for the sizes the tests use.
inline std::uint64_t pascal_binomial(unsigned n, unsigned k) {
  std::vector<std::vector<std::uint64_t>> t(n + 1);
  for (unsigned i = 0; i <= n; ++i) {
    t[i].assign(i + 1, 1);
    for (unsigned j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return k > n ? 0 : t[n][k];
}

// Every m-subset of {0..M-1} in lexicographic order, by recursion.
inline std::vector<std::vector<unsigned>> all_subsets(unsigned M, unsigned m) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned)> rec = [&](unsigned start) {
    if (cur.size() == m) {
      out.push_back(cur);
      return;
    }
    for (unsigned p = start; p < M; ++p) {
      cur.push_back(p);
      rec(p + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// Softmax in extended precision without max subtraction.
inline std::vector<long double> softmax_ld(const std::vector<long double>& v) {
  long double total = 0.0L;
  std::vector<long double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) total += (out[i] = std::exp(v[i]));
  for (auto& x : out) x /= total;
  return out;
}

// Central difference (f(x+h) - f(x-h)) / 2h for one coordinate.
inline double central_difference(double& coordinate, double h, const std::function<double()>& f) {
  const double saved = coordinate;
  coordinate = saved + h;
  const double up = f();
  coordinate = saved - h;
  const double down = f();
  coordinate = saved;
  return (up - down) / (2.0 * h);
}

}  // namespace gdrae::oracle
