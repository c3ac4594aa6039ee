#pragma once

// Reference computations used to check the library. Each one is written from
// the textbook definition and shares no code with src/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

// Sort a copy, then interpolate between the two order statistics around
// position q (n - 1).
inline double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const auto above = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - std::floor(pos);
  return (1.0 - w) * xs[below] + w * xs[above];
}

// U of `a` by direct pair counting: 1 per pair a > b, 1/2 per tie. Kept doubled
// so the arithmetic stays in integers.
inline long long doubled_u(const std::vector<double>& a, const std::vector<double>& b) {
  long long twice = 0;
  for (double x : a)
    for (double y : b) twice += x > y ? 2 : (x == y ? 1 : 0);
  return twice;
}

// Two-sided permutation p-value: share of all relabelings of the pooled values
// into groups of the original sizes whose U is at least as far from its mean.
inline double mann_whitney_permutation_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto na = static_cast<long long>(a.size());
  const auto nb = static_cast<long long>(b.size());
  const long long centre = na * nb;  // doubled mean of U
  const long long observed = std::llabs(doubled_u(a, b) - centre);

  std::vector<bool> in_a(pooled.size(), false);
  std::fill(in_a.begin(), in_a.begin() + na, true);
  std::sort(in_a.begin(), in_a.end());
  long long hits = 0, total = 0;
  do {
    std::vector<double> ga, gb;
    for (std::size_t i = 0; i < pooled.size(); ++i) (in_a[i] ? ga : gb).push_back(pooled[i]);
    ++total;
    if (std::llabs(doubled_u(ga, gb) - centre) >= observed) ++hits;
  } while (std::next_permutation(in_a.begin(), in_a.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Every ordered resample of `xs` (n^n of them), reduced by `stat`.
inline std::vector<double> all_resample_statistics(
    const std::vector<double>& xs, const std::function<double(std::vector<double>)>& stat) {
  std::vector<double> out;
  std::vector<double> current;
  std::function<void()> recurse = [&]() {
    if (current.size() == xs.size()) {
      out.push_back(stat(current));
      return;
    }
    for (double x : xs) {
      current.push_back(x);
      recurse();
      current.pop_back();
    }
  };
  recurse();
  return out;
}

struct Item {
  std::size_t id;
  double cost;
  double benefit;
};

struct Best {
  std::vector<std::size_t> ids;  // ascending
  double net = 0.0;
};

// Recursive include/exclude over every subset; keeps the highest total net
// benefit within budget, ties to the lexicographically smaller id list.
// With `approval_only`, items whose benefit does not exceed cost are skipped.
inline Best best_subset(std::vector<Item> items, double budget, bool approval_only) {
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.id < y.id; });
  Best best;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, double, double)> visit = [&](std::size_t k, double cost,
                                                               double net) {
    if (k == items.size()) {
      if (cost > budget) return;
      if (net > best.net || (net == best.net && chosen < best.ids)) best = {chosen, net};
      return;
    }
    const Item& it = items[k];
    if (!approval_only || it.benefit > it.cost) {
      chosen.push_back(it.id);
      visit(k + 1, cost + it.cost, net + (it.benefit - it.cost));
      chosen.pop_back();
    }
    visit(k + 1, cost, net);
  };
  visit(0, 0.0, 0.0);
  return best;
}

// Greedy fill by benefit/cost ratio, highest first, ids breaking ties.
inline std::vector<std::size_t> greedy_ids(std::vector<Item> items, double budget) {
  std::vector<Item> eligible;
  for (const auto& it : items)
    if (it.benefit > it.cost) eligible.push_back(it);
  std::sort(eligible.begin(), eligible.end(), [](const Item& x, const Item& y) {
    const double rx = x.benefit / x.cost, ry = y.benefit / y.cost;
    return rx != ry ? rx > ry : x.id < y.id;
  });
  std::vector<std::size_t> ids;
  double spent = 0.0;
  for (const auto& it : eligible) {
    if (spent + it.cost <= budget) {
      spent += it.cost;
      ids.push_back(it.id);
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace oracle
