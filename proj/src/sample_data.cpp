#include "refcast/sample_data.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "refcast/rng.h"

namespace refcast {

namespace {

constexpr int kMaxAttempts = 100000;

std::vector<double> lognormal_draws(Rng& rng, std::size_t n, double sigma) {
  std::vector<double> out(n);
  for (auto& v : out) v = std::exp(sigma * rng.normal());
  return out;
}

std::vector<double> uniform_draws(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> out(n);
  for (auto& v : out) v = rng.uniform(lo, hi);
  return out;
}

template <typename T>
void shuffle(Rng& rng, std::vector<T>& values) {
  for (std::size_t i = values.size(); i > 1; --i) std::swap(values[i - 1], values[rng.below(i)]);
}

// Shifts and scales `raw` so that fixed + free has exactly n values with the
// target mean and sample sd. Nullopt when the fixed part leaves no variance.
std::optional<std::vector<double>> moment_match(const std::vector<double>& fixed,
                                                const std::vector<double>& raw, double mean,
                                                double sd) {
  const double n = static_cast<double>(fixed.size() + raw.size());
  const double m = static_cast<double>(raw.size());
  double fixed_sum = 0.0, fixed_sq = 0.0;
  for (double v : fixed) {
    fixed_sum += v;
    fixed_sq += v * v;
  }
  const double free_mean = (n * mean - fixed_sum) / m;
  const double free_var = ((n - 1.0) * sd * sd + n * mean * mean - fixed_sq) / m - free_mean * free_mean;
  if (!(free_var > 0.0)) return std::nullopt;

  const double raw_mean = std::accumulate(raw.begin(), raw.end(), 0.0) / m;
  double raw_ss = 0.0;
  for (double v : raw) raw_ss += (v - raw_mean) * (v - raw_mean);
  const double raw_sd = std::sqrt(raw_ss / m);
  if (!(raw_sd > 0.0)) return std::nullopt;

  std::vector<double> out(raw.size());
  const double scale = std::sqrt(free_var) / raw_sd;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = free_mean + scale * (raw[i] - raw_mean);
  return out;
}

// Redraws until the moment-matched free group satisfies `ok`.
std::vector<double> build_class(Rng& rng, double mean, double sd,
                                const std::function<std::vector<double>(Rng&)>& draw_fixed,
                                const std::function<std::vector<double>(Rng&)>& draw_free_raw,
                                const std::function<bool(double)>& ok, std::vector<double>* fixed_out) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    auto fixed = draw_fixed(rng);
    auto raw = draw_free_raw(rng);
    auto free = moment_match(fixed, raw, mean, sd);
    if (!free || !std::all_of(free->begin(), free->end(), ok)) continue;
    if (fixed_out) *fixed_out = fixed;
    return *free;
  }
  throw std::runtime_error("sample generator failed to satisfy class constraints");
}

// 21 increasing positive overruns with the 11th equal to 40 and the 19th to 68,
// the order statistics picked out by the 0.5 and 0.9 quantiles.
std::vector<double> uk_rail_values(Rng& rng) {
  static_assert(kUkRailCount == 21);
  auto raw = lognormal_draws(rng, kUkRailCount, 0.5);
  std::sort(raw.begin(), raw.end());
  const double lo = rng.uniform(3.0, 15.0);
  const double hi = rng.uniform(90.0, 130.0);
  auto segment = [&](double r, double r0, double r1, double v0, double v1) {
    return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
  };
  std::vector<double> out(kUkRailCount);
  for (std::size_t i = 0; i < kUkRailCount; ++i) {
    if (i <= 10)
      out[i] = segment(raw[i], raw[0], raw[10], lo, kUkRailMedianUplift);
    else if (i <= 18)
      out[i] = segment(raw[i], raw[10], raw[18], kUkRailMedianUplift, kUkRailP90Uplift);
    else
      out[i] = segment(raw[i], raw[18], raw[20], kUkRailP90Uplift, hi);
  }
  out[10] = kUkRailMedianUplift;
  out[18] = kUkRailP90Uplift;
  return out;
}

std::string padded(const char* prefix, std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%03zu", prefix, k);
  return buf;
}

double round_to(double v, double step) { return std::round(v / step) * step; }

class Builder {
 public:
  Builder(Rng& rng, std::uint64_t seed) : rng_(rng) {
    dataset_.provenance = "synthetic reference dataset, seed " + std::to_string(seed);
  }

  ProjectRecord& add(std::string id, const char* kind, ProjectType type, std::string region) {
    ProjectRecord r;
    r.name = "Synthetic " + std::string(kind) + " project " + id.substr(id.find('-') + 1);
    r.id = std::move(id);
    r.project_type = type;
    r.region = std::move(region);
    r.decision_year = 1927 + static_cast<int>(rng_.below(72));
    r.completion_year = r.decision_year + 2 + static_cast<int>(rng_.below(11));
    r.cost_unit = "USD_M_2004";
    const double median_cost = type == ProjectType::road ? 150.0 : 900.0;
    r.estimated_cost = round_to(median_cost * std::exp(0.9 * rng_.normal()), 0.1);
    if (r.estimated_cost < 1.0) r.estimated_cost = 1.0;
    dataset_.records.push_back(std::move(r));
    return dataset_.records.back();
  }

  void set_cost_outcome(ProjectRecord& r, double overrun) {
    if (overrun == kUkRailMedianUplift || overrun == kUkRailP90Uplift) {
      // Multiples of 25 keep 100 * (actual - est) / est exact for the anchors.
      const double m = static_cast<double>(4 + rng_.below(60));
      r.estimated_cost = 25.0 * m;
      r.actual_cost = m * (25.0 + overrun / 4.0);
      return;
    }
    r.actual_cost = r.estimated_cost * (1.0 + overrun / 100.0);
  }

  void set_traffic_outcome(ProjectRecord& r, double inaccuracy) {
    const bool rail = r.project_type == ProjectType::rail;
    const double median = rail ? 3.0e7 : 25000.0;
    r.estimated_traffic = std::round(median * std::exp(0.7 * rng_.normal()));
    r.actual_traffic = *r.estimated_traffic * (1.0 + inaccuracy / 100.0);
    r.traffic_unit = rail ? "passengers/year" : "vehicles/day";
  }

  std::string region(double uk_share) { return rng_.uniform() < uk_share ? "UK" : "non-UK"; }

  Dataset take() { return std::move(dataset_); }

 private:
  Rng& rng_;
  Dataset dataset_;
};

std::vector<double> negatives(Rng& rng, std::size_t n) { return uniform_draws(rng, n, -20.0, -0.5); }

}  // namespace

Dataset make_sample_dataset(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x5A3D));
  const auto& rail_cost = kClassTargets[0];
  const auto& bt_cost = kClassTargets[1];
  const auto& road_cost = kClassTargets[2];
  const auto& rail_traffic = kClassTargets[3];
  const auto& road_traffic = kClassTargets[4];

  auto positive = [](double v) { return v > 0.5; };

  // Rail cost: UK anchors and a few underruns are fixed, the rest is matched.
  std::vector<double> rail_fixed;
  auto rail_free = build_class(
      rng, rail_cost.mean, rail_cost.sd,
      [](Rng& r) {
        auto v = uk_rail_values(r);
        auto neg = negatives(r, 6);
        v.insert(v.end(), neg.begin(), neg.end());
        return v;
      },
      [&](Rng& r) { return lognormal_draws(r, rail_cost.n - kUkRailCount - 6, 0.8); }, positive,
      &rail_fixed);
  std::vector<double> uk_values(rail_fixed.begin(), rail_fixed.begin() + kUkRailCount);
  std::vector<double> non_uk_values(rail_fixed.begin() + kUkRailCount, rail_fixed.end());
  non_uk_values.insert(non_uk_values.end(), rail_free.begin(), rail_free.end());

  std::vector<double> bt_values;
  auto bt_free = build_class(
      rng, bt_cost.mean, bt_cost.sd, [](Rng& r) { return negatives(r, 3); },
      [&](Rng& r) { return lognormal_draws(r, bt_cost.n - 3, 1.3); }, positive, &bt_values);
  bt_values.insert(bt_values.end(), bt_free.begin(), bt_free.end());

  std::vector<double> road_values;
  auto road_free = build_class(
      rng, road_cost.mean, road_cost.sd, [](Rng& r) { return negatives(r, 17); },
      [&](Rng& r) { return lognormal_draws(r, road_cost.n - 17, 1.1); }, positive, &road_values);
  road_values.insert(road_values.end(), road_free.begin(), road_free.end());

  // Rail traffic: 4 forecasts within 20 percent, 21 short by more than that.
  std::vector<double> rail_traffic_values;
  auto rail_traffic_free = build_class(
      rng, rail_traffic.mean, rail_traffic.sd,
      [](Rng& r) { return uniform_draws(r, 4, -20.0, -10.0); },
      [&](Rng& r) { return uniform_draws(r, rail_traffic.n - 4, 0.0, 1.0); },
      [](double v) { return v > -97.0 && v < -20.5; }, &rail_traffic_values);
  rail_traffic_values.insert(rail_traffic_values.end(), rail_traffic_free.begin(),
                             rail_traffic_free.end());

  // Road traffic: 91 within 20 percent, 40 short by more, the rest over by more.
  std::vector<double> road_traffic_values;
  auto road_traffic_free = build_class(
      rng, road_traffic.mean, road_traffic.sd,
      [](Rng& r) {
        auto v = uniform_draws(r, 91, -19.5, 19.5);
        auto low = uniform_draws(r, 40, -80.0, -21.0);
        v.insert(v.end(), low.begin(), low.end());
        return v;
      },
      [&](Rng& r) { return lognormal_draws(r, road_traffic.n - 131, 0.6); },
      [](double v) { return v > 20.5; }, &road_traffic_values);
  road_traffic_values.insert(road_traffic_values.end(), road_traffic_free.begin(),
                             road_traffic_free.end());

  shuffle(rng, uk_values);
  shuffle(rng, non_uk_values);
  shuffle(rng, bt_values);
  shuffle(rng, road_values);
  shuffle(rng, rail_traffic_values);
  shuffle(rng, road_traffic_values);

  Builder b(rng, seed);
  std::size_t rail_id = 0;
  for (double v : uk_values) b.set_cost_outcome(b.add(padded("rail", ++rail_id), "rail", ProjectType::rail, "UK"), v);
  // The first kRailJointCount non-UK rail projects also carry traffic outcomes.
  std::size_t traffic_used = 0;
  for (double v : non_uk_values) {
    auto& r = b.add(padded("rail", ++rail_id), "rail", ProjectType::rail, "non-UK");
    b.set_cost_outcome(r, v);
    if (traffic_used < kRailJointCount) b.set_traffic_outcome(r, rail_traffic_values[traffic_used++]);
  }
  while (traffic_used < rail_traffic_values.size()) {
    auto& r = b.add(padded("rail", ++rail_id), "rail", ProjectType::rail, b.region(0.0));
    b.set_traffic_outcome(r, rail_traffic_values[traffic_used++]);
  }

  std::size_t bt_id = 0;
  for (double v : bt_values) {
    auto& r = b.add(padded("bt", ++bt_id), "bridge/tunnel", ProjectType::bridge_tunnel, b.region(0.15));
    b.set_cost_outcome(r, v);
  }

  // Every road project has a traffic outcome; the first 167 also a cost outcome.
  for (std::size_t i = 0; i < road_traffic_values.size(); ++i) {
    auto& r = b.add(padded("road", i + 1), "road", ProjectType::road, b.region(0.15));
    if (i < road_values.size()) b.set_cost_outcome(r, road_values[i]);
    b.set_traffic_outcome(r, road_traffic_values[i]);
  }
  return b.take();
}

}  // namespace refcast
