#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace refcast {

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample sd (n-1); absent when n == 1
};

struct TestResult {
  double statistic = 0.0;  // Mann-Whitney U of the first sample
  double p_value = 1.0;
  std::string method;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;

  bool operator==(const Interval&) const = default;
};

SummaryStats summarize(std::span<const double> sample);

// Fraction of values strictly above zero.
double share_overrun(std::span<const double> sample);

// Fraction with |value| > band (strict).
double share_outside_band(std::span<const double> sample, double band);

// A traffic inaccuracy i (actual vs. estimate) restated as the percentage by
// which the estimate exceeds the actual: 100 (-i) / (100 + i).
double shortfall_to_overestimate(double inaccuracy);
double overestimate_to_shortfall(double overestimate);

// Combined sizes at or below this use the exact permutation distribution.
inline constexpr std::size_t kExactPermutationLimit = 12;

// Two-sided Mann-Whitney U with midranks. Exact permutation p-value for small
// samples, otherwise normal approximation with tie and continuity correction.
TestResult separation_test(std::span<const double> a, std::span<const double> b);

// Individual paths of separation_test, exposed for cross-checking.
TestResult mann_whitney_exact(std::span<const double> a, std::span<const double> b);
TestResult mann_whitney_normal(std::span<const double> a, std::span<const double> b);

struct BootstrapStatistic {
  enum class Kind { mean, quantile } kind = Kind::mean;
  double q = 0.5;

  static BootstrapStatistic mean() { return {}; }
  static BootstrapStatistic quantile(double q) { return {Kind::quantile, q}; }

  double evaluate(std::vector<double>& resample) const;
};

// Replicates of `statistic` over resamples with replacement. Resample r draws
// from its own stream derive_seed(seed, r), so the result does not depend on
// thread count. When n^n <= reps every ordered resample is enumerated instead
// and the seed is unused.
std::vector<double> bootstrap_replicates(std::span<const double> sample,
                                         const BootstrapStatistic& statistic, std::size_t reps,
                                         std::uint64_t seed);
std::vector<double> bootstrap_replicates_serial(std::span<const double> sample,
                                                const BootstrapStatistic& statistic,
                                                std::size_t reps, std::uint64_t seed);

// Percentile interval from replicates: sorted order statistics at
// round((R-1) a/2) and round((R-1)(1 - a/2)) with a = 1 - level.
Interval percentile_interval(std::vector<double> replicates, double level);

Interval bootstrap_ci(std::span<const double> sample, const BootstrapStatistic& statistic,
                      double level, std::size_t reps, std::uint64_t seed);

}  // namespace refcast
