#include "refcast/class_stats.h"

#include <algorithm>
#include <bit>
#include <numbers>
#include <optional>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "refcast/quantile.h"
#include "refcast/rng.h"

namespace refcast {

namespace {

void require_non_empty(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
}

// Ranks of the pooled sample, doubled so midranks stay integral.
struct PooledRanks {
  std::vector<long long> doubled;  // doubled rank per pooled position, a first then b
  long long tie_term = 0;          // sum of t^3 - t over tie groups
};

PooledRanks pooled_ranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> values(a.begin(), a.end());
  values.insert(values.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

  PooledRanks out;
  out.doubled.assign(n, 0);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    while (end + 1 < n && values[order[end + 1]] == values[order[start]]) ++end;
    // ranks start+1 .. end+1, midrank doubled = start + end + 2
    const auto doubled = static_cast<long long>(start + end + 2);
    for (std::size_t k = start; k <= end; ++k) out.doubled[order[k]] = doubled;
    const auto t = static_cast<long long>(end - start + 1);
    out.tie_term += t * t * t - t;
    start = end + 1;
  }
  return out;
}

// 2U for the first na pooled positions' ranks.
long long doubled_u(long long doubled_rank_sum, long long na) {
  return doubled_rank_sum - na * (na + 1);
}

void require_test_sizes(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("separation test needs at least 2 values per sample");
  }
}

}  // namespace

SummaryStats summarize(std::span<const double> sample) {
  require_non_empty(sample);
  SummaryStats s;
  s.n = sample.size();
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  if (s.n >= 2) {
    double ss = 0.0;
    for (double x : sample) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

double share_overrun(std::span<const double> sample) {
  require_non_empty(sample);
  const auto count = std::count_if(sample.begin(), sample.end(), [](double x) { return x > 0.0; });
  return static_cast<double>(count) / static_cast<double>(sample.size());
}

double share_outside_band(std::span<const double> sample, double band) {
  require_non_empty(sample);
  if (!(band > 0.0)) throw std::invalid_argument("band must be positive");
  const auto count =
      std::count_if(sample.begin(), sample.end(), [band](double x) { return std::abs(x) > band; });
  return static_cast<double>(count) / static_cast<double>(sample.size());
}

double shortfall_to_overestimate(double inaccuracy) {
  if (!(inaccuracy > -100.0)) throw std::invalid_argument("inaccuracy must exceed -100 percent");
  return 100.0 * (-inaccuracy) / (100.0 + inaccuracy);
}

double overestimate_to_shortfall(double overestimate) {
  if (!(overestimate > -100.0)) throw std::invalid_argument("overestimate must exceed -100 percent");
  return -100.0 * overestimate / (100.0 + overestimate);
}

TestResult mann_whitney_exact(std::span<const double> a, std::span<const double> b) {
  require_test_sizes(a, b);
  const std::size_t n = a.size() + b.size();
  if (n > 20) throw std::invalid_argument("exact permutation test limited to 20 values");
  const auto ranks = pooled_ranks(a, b);
  const auto na = static_cast<long long>(a.size());
  const auto nb = static_cast<long long>(b.size());

  long long observed_sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) observed_sum += ranks.doubled[i];
  const long long observed_u2 = doubled_u(observed_sum, na);
  const long long observed_dev = std::abs(observed_u2 - na * nb);

  std::size_t extreme = 0;
  std::size_t total = 0;
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (std::popcount(mask) != na) continue;
    long long sum = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sum += ranks.doubled[i];
    ++total;
    if (std::abs(doubled_u(sum, na) - na * nb) >= observed_dev) ++extreme;
  }
  return {static_cast<double>(observed_u2) / 2.0,
          static_cast<double>(extreme) / static_cast<double>(total), "mann_whitney_u_exact"};
}

TestResult mann_whitney_normal(std::span<const double> a, std::span<const double> b) {
  require_test_sizes(a, b);
  const auto ranks = pooled_ranks(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;

  long long observed_sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) observed_sum += ranks.doubled[i];
  const double u = static_cast<double>(doubled_u(observed_sum, static_cast<long long>(a.size()))) / 2.0;

  const double mu = na * nb / 2.0;
  const double var =
      na * nb / 12.0 * ((n + 1.0) - static_cast<double>(ranks.tie_term) / (n * (n - 1.0)));
  TestResult result{u, 1.0, "mann_whitney_u_normal_tie_corrected"};
  if (var <= 0.0) return result;
  const double z = std::max(std::abs(u - mu) - 0.5, 0.0) / std::sqrt(var);
  result.p_value = std::clamp(std::erfc(z / std::numbers::sqrt2), 0.0, 1.0);
  return result;
}

TestResult separation_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() + b.size() <= kExactPermutationLimit) return mann_whitney_exact(a, b);
  return mann_whitney_normal(a, b);
}

double BootstrapStatistic::evaluate(std::vector<double>& resample) const {
  if (kind == Kind::mean) {
    return std::accumulate(resample.begin(), resample.end(), 0.0) /
           static_cast<double>(resample.size());
  }
  std::sort(resample.begin(), resample.end());
  return interpolated_quantile(resample, q);
}

namespace {

// n^n if it does not exceed `cap`, otherwise nullopt.
std::optional<std::size_t> resample_space(std::size_t n, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / n) return std::nullopt;
    total *= n;
  }
  return total;
}

void fill_enumerated(std::span<const double> sample, std::size_t index, std::vector<double>& out) {
  const std::size_t n = sample.size();
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = sample[index % n];
    index /= n;
  }
}

void fill_random(std::span<const double> sample, std::uint64_t seed, std::vector<double>& out) {
  Rng rng(seed);
  for (auto& v : out) v = sample[rng.below(sample.size())];
}

void check_bootstrap_args(std::span<const double> sample, const BootstrapStatistic& statistic,
                          std::size_t reps) {
  require_non_empty(sample);
  if (reps < 1) throw std::invalid_argument("bootstrap needs at least one replicate");
  if (statistic.kind == BootstrapStatistic::Kind::quantile &&
      !(statistic.q >= 0.0 && statistic.q <= 1.0)) {
    throw std::invalid_argument("bootstrap quantile level must lie in [0, 1]");
  }
}

}  // namespace

std::vector<double> bootstrap_replicates_serial(std::span<const double> sample,
                                                const BootstrapStatistic& statistic,
                                                std::size_t reps, std::uint64_t seed) {
  check_bootstrap_args(sample, statistic, reps);
  const auto space = resample_space(sample.size(), reps);
  const std::size_t count = space ? *space : reps;
  std::vector<double> out(count);
  std::vector<double> resample(sample.size());
  for (std::size_t r = 0; r < count; ++r) {
    if (space)
      fill_enumerated(sample, r, resample);
    else
      fill_random(sample, derive_seed(seed, r), resample);
    out[r] = statistic.evaluate(resample);
  }
  return out;
}

std::vector<double> bootstrap_replicates(std::span<const double> sample,
                                         const BootstrapStatistic& statistic, std::size_t reps,
                                         std::uint64_t seed) {
  check_bootstrap_args(sample, statistic, reps);
  const auto space = resample_space(sample.size(), reps);
  const std::size_t count = space ? *space : reps;
  std::vector<double> out(count);
  const auto signed_count = static_cast<std::ptrdiff_t>(count);

#pragma omp parallel
  {
    std::vector<double> resample(sample.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < signed_count; ++r) {
      const auto idx = static_cast<std::size_t>(r);
      if (space)
        fill_enumerated(sample, idx, resample);
      else
        fill_random(sample, derive_seed(seed, idx), resample);
      out[idx] = statistic.evaluate(resample);
    }
  }
  return out;
}

Interval percentile_interval(std::vector<double> replicates, double level) {
  if (replicates.empty()) throw std::invalid_argument("no bootstrap replicates");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
  std::sort(replicates.begin(), replicates.end());
  const double alpha = 1.0 - level;
  const double last = static_cast<double>(replicates.size() - 1);
  const auto lo = static_cast<std::size_t>(std::round(last * alpha / 2.0));
  const auto hi = static_cast<std::size_t>(std::round(last * (1.0 - alpha / 2.0)));
  return {replicates[lo], replicates[std::max(lo, hi)], level};
}

Interval bootstrap_ci(std::span<const double> sample, const BootstrapStatistic& statistic,
                      double level, std::size_t reps, std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
  return percentile_interval(bootstrap_replicates(sample, statistic, reps, seed), level);
}

}  // namespace refcast
