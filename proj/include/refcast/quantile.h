#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace refcast {

// Linear interpolation between order statistics at h = (n-1) q. `sorted` must
// be non-decreasing. q = 0 and q = 1 return the extremes exactly.
inline double interpolated_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  const double frac = h - lo;
  if (i + 1 >= sorted.size() || frac == 0.0) return sorted[i];
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace refcast
