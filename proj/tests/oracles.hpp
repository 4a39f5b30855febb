#pragma once

// Test-side reference computations, written independently of the library code.

#include <cmath>
#include <cstdint>
#include <vector>

#include "wvn/metric.hpp"

namespace oracle {

inline wvn::FiniteMetricSpace line(const std::vector<double>& xs) {
  std::vector<std::vector<double>> d(xs.size(), std::vector<double>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) d[i][j] = std::abs(xs[i] - xs[j]);
  return wvn::validate_metric(d);
}

// Smallest closed-ball cover by brute force over subsets in order of size.
inline std::size_t min_cover_size(const wvn::FiniteMetricSpace& X, double eps) {
  const std::size_t n = X.size();
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
    if (bits >= best) continue;
    bool covers = true;
    for (std::size_t p = 0; p < n && covers; ++p) {
      bool hit = false;
      for (std::size_t m = 0; m < n && !hit; ++m) hit = (mask >> m & 1u) && X(p, m) <= eps;
      covers = hit;
    }
    if (covers) best = bits;
  }
  return best;
}

// Star with n leaves: centre 0, leaves 1..n, centre-leaf 1, leaf-leaf 2.
inline wvn::FiniteMetricSpace star(std::size_t n) {
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n + 1, 2.0));
  for (std::size_t i = 0; i <= n; ++i) {
    d[i][i] = 0.0;
    if (i > 0) d[0][i] = d[i][0] = 1.0;
  }
  return wvn::validate_metric(d);
}

}  // namespace oracle
