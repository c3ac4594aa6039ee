#include "refcast/selection_sim.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "refcast/rng.h"

namespace refcast {

std::string_view to_string(SelectionRule rule) {
  return rule == SelectionRule::greedy_bcr ? "greedy_bcr" : "exhaustive";
}

SelectionRule parse_selection_rule(std::string_view text) {
  if (text == "greedy_bcr") return SelectionRule::greedy_bcr;
  if (text == "exhaustive") return SelectionRule::exhaustive;
  throw std::invalid_argument("unknown selection rule '" + std::string(text) + "'");
}

std::string_view to_string(ParametricBias::Shape shape) {
  switch (shape) {
    case ParametricBias::Shape::constant: return "constant";
    case ParametricBias::Shape::normal: return "normal";
    case ParametricBias::Shape::lognormal: return "lognormal";
  }
  return "constant";
}

ParametricBias::Shape parse_shape(std::string_view text) {
  if (text == "constant") return ParametricBias::Shape::constant;
  if (text == "normal") return ParametricBias::Shape::normal;
  if (text == "lognormal") return ParametricBias::Shape::lognormal;
  throw std::invalid_argument("unknown bias shape '" + std::string(text) + "'");
}

namespace {

void validate_source(const BiasSource& source, const char* which) {
  const std::string prefix = std::string(which) + ": ";
  if (const auto* e = std::get_if<EmpiricalBias>(&source)) {
    if (e->sample.empty()) throw std::invalid_argument(prefix + "empirical sample is empty");
    for (double v : e->sample)
      if (!(v > -100.0)) throw std::invalid_argument(prefix + "empirical sample has a value <= -100");
    return;
  }
  const auto& p = std::get<ParametricBias>(source);
  if (!std::isfinite(p.mean) || !(p.sd >= 0.0)) {
    throw std::invalid_argument(prefix + "parametric mean must be finite and sd non-negative");
  }
  if (p.shape != ParametricBias::Shape::normal && !(p.mean > -100.0)) {
    throw std::invalid_argument(prefix + "mean must exceed -100");
  }
}

// Maps a standard normal score to an inaccuracy draw.
double draw_bias(const BiasSource& source, double z) {
  if (const auto* e = std::get_if<EmpiricalBias>(&source)) {
    const double u = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const auto n = e->sample.size();
    const auto idx = std::min(static_cast<std::size_t>(u * static_cast<double>(n)), n - 1);
    return e->sample[idx];
  }
  const auto& p = std::get<ParametricBias>(source);
  switch (p.shape) {
    case ParametricBias::Shape::constant: return p.mean;
    case ParametricBias::Shape::normal: return p.mean + p.sd * z;
    case ParametricBias::Shape::lognormal: {
      const double m = 100.0 + p.mean;
      const double sigma2 = std::log1p((p.sd * p.sd) / (m * m));
      const double mu = std::log(m) - sigma2 / 2.0;
      return std::exp(mu + std::sqrt(sigma2) * z) - 100.0;
    }
  }
  return p.mean;
}

std::vector<Candidate> sorted_by_id(std::span<const Candidate> candidates) {
  std::vector<Candidate> out(candidates.begin(), candidates.end());
  std::sort(out.begin(), out.end(),
            [](const Candidate& a, const Candidate& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].id == out[i - 1].id) throw std::invalid_argument("duplicate candidate id");
  }
  return out;
}

double basis_cost(const Candidate& c, Basis basis) {
  return basis == Basis::estimated ? c.est_cost : c.true_cost;
}

double basis_benefit(const Candidate& c, Basis basis) {
  return basis == Basis::estimated ? c.est_benefit : c.true_benefit;
}

Selection finish(std::span<const Candidate> by_id, std::vector<std::size_t> positions, Basis basis) {
  std::sort(positions.begin(), positions.end());
  Selection s;
  for (auto pos : positions) {
    s.ids.push_back(by_id[pos].id);
    s.total_cost += basis_cost(by_id[pos], basis);
    s.total_benefit += basis_benefit(by_id[pos], basis);
  }
  return s;
}

Selection greedy(std::span<const Candidate> by_id, double budget, Basis basis) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < by_id.size(); ++i)
    if (basis_benefit(by_id[i], basis) > basis_cost(by_id[i], basis)) order.push_back(i);
  auto bcr = [&](std::size_t i) { return basis_benefit(by_id[i], basis) / basis_cost(by_id[i], basis); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return bcr(a) > bcr(b); });

  std::vector<std::size_t> chosen;
  double spent = 0.0;
  for (auto i : order) {
    const double cost = basis_cost(by_id[i], basis);
    if (spent + cost <= budget) {
      spent += cost;
      chosen.push_back(i);
    }
  }
  return finish(by_id, std::move(chosen), basis);
}

// Depth-first include/exclude search in id order with an optimistic bound.
class BranchAndBound {
 public:
  BranchAndBound(std::span<const Candidate> by_id, double budget, Basis basis) : budget_(budget) {
    for (std::size_t i = 0; i < by_id.size(); ++i) {
      const double cost = basis_cost(by_id[i], basis);
      const double net = basis_benefit(by_id[i], basis) - cost;
      if (net > 0.0 && cost <= budget) items_.push_back({i, by_id[i].id, cost, net});
    }
    suffix_.assign(items_.size() + 1, 0.0);
    for (std::size_t k = items_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + items_[k].net;
  }

  std::vector<std::size_t> solve() {
    path_.clear();
    search(0, 0.0, 0.0);
    std::vector<std::size_t> out;
    for (auto k : best_) out.push_back(items_[k].position);
    return out;
  }

 private:
  struct Item {
    std::size_t position;
    std::size_t id;
    double cost;
    double net;
  };

  bool lexicographically_smaller(const std::vector<std::size_t>& a,
                                 const std::vector<std::size_t>& b) const {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [&](std::size_t x, std::size_t y) { return items_[x].id < items_[y].id; });
  }

  void search(std::size_t k, double cost, double value) {
    const double slack = 1e-9 * (std::abs(best_value_) + 1.0);
    if (value + suffix_[k] < best_value_ - slack) return;
    if (k == items_.size()) {
      if (value > best_value_ || (value == best_value_ && lexicographically_smaller(path_, best_))) {
        best_value_ = value;
        best_ = path_;
      }
      return;
    }
    if (cost + items_[k].cost <= budget_) {
      path_.push_back(k);
      search(k + 1, cost + items_[k].cost, value + items_[k].net);
      path_.pop_back();
    }
    search(k + 1, cost, value);
  }

  double budget_;
  std::vector<Item> items_;
  std::vector<double> suffix_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> best_;
  double best_value_ = 0.0;
};

std::vector<double> midranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    while (end + 1 < n && x[order[end + 1]] == x[order[start]]) ++end;
    const double r = (static_cast<double>(start + end) + 2.0) / 2.0;
    for (std::size_t k = start; k <= end; ++k) ranks[order[k]] = r;
    start = end + 1;
  }
  return ranks;
}

}  // namespace

void SimConfig::validate() const {
  if (n_candidates < 1) throw std::invalid_argument("n_candidates must be at least 1");
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw std::invalid_argument("budget must be >= 0");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (selection_rule == SelectionRule::exhaustive && n_candidates > kExhaustiveLimit) {
    throw std::invalid_argument("exhaustive selection supports at most 20 candidates");
  }
  if (!(true_cost_min > 0.0) || !(true_cost_max >= true_cost_min)) {
    throw std::invalid_argument("true cost range must satisfy 0 < min <= max");
  }
  if (!(true_benefit_min > 0.0) || !(true_benefit_max >= true_benefit_min)) {
    throw std::invalid_argument("true benefit range must satisfy 0 < min <= max");
  }
  if (!(bias_correlation >= -1.0 && bias_correlation <= 1.0)) {
    throw std::invalid_argument("bias_correlation must lie in [-1, 1]");
  }
  validate_source(cost_bias, "cost bias");
  validate_source(benefit_bias, "benefit bias");
}

std::vector<Candidate> generate_portfolio(const SimConfig& config, std::uint64_t trial_seed) {
  config.validate();
  constexpr int kMaxRedraws = 10000;
  Rng rng(trial_seed);
  const double rho = config.bias_correlation;
  const double rho_c = std::sqrt(1.0 - rho * rho);

  std::vector<Candidate> out(config.n_candidates);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Candidate& c = out[i];
    c.id = i;
    c.true_cost = rng.uniform(config.true_cost_min, config.true_cost_max);
    c.true_benefit = rng.uniform(config.true_benefit_min, config.true_benefit_max);
    // Draws at or below -100 percent are rejected and the pair redrawn.
    int attempts = 0;
    do {
      if (++attempts > kMaxRedraws) {
        throw std::runtime_error("bias source keeps producing draws <= -100 percent");
      }
      const double z_cost = rng.normal();
      const double z_benefit = rho * z_cost + rho_c * rng.normal();
      c.sampled_cost_overrun = draw_bias(config.cost_bias, z_cost);
      c.sampled_benefit_inaccuracy = draw_bias(config.benefit_bias, z_benefit);
    } while (!(c.sampled_cost_overrun > -100.0) || !(c.sampled_benefit_inaccuracy > -100.0));
    c.est_cost = c.true_cost / (1.0 + c.sampled_cost_overrun / 100.0);
    c.est_benefit = c.true_benefit / (1.0 + c.sampled_benefit_inaccuracy / 100.0);
  }
  return out;
}

Selection select_projects(std::span<const Candidate> candidates, double budget, Basis basis,
                          SelectionRule rule) {
  if (candidates.empty()) throw std::invalid_argument("no candidates to select from");
  if (!(budget >= 0.0)) throw std::invalid_argument("budget must be >= 0");
  if (rule == SelectionRule::exhaustive && candidates.size() > kExhaustiveLimit) {
    throw std::invalid_argument("exhaustive selection supports at most 20 candidates");
  }
  const auto by_id = sorted_by_id(candidates);
  if (rule == SelectionRule::greedy_bcr) return greedy(by_id, budget, basis);
  return finish(by_id, BranchAndBound(by_id, budget, basis).solve(), basis);
}

Selection brute_force_optimal(std::span<const Candidate> candidates, double budget) {
  if (candidates.size() > kExhaustiveLimit) {
    throw std::invalid_argument("brute force supports at most 20 candidates");
  }
  const auto by_id = sorted_by_id(candidates);
  const std::size_t n = by_id.size();
  std::vector<std::size_t> best;
  double best_value = 0.0;
  std::vector<std::size_t> current;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    current.clear();
    double cost = 0.0;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      current.push_back(i);
      cost += by_id[i].true_cost;
      value += by_id[i].true_benefit - by_id[i].true_cost;
    }
    if (cost > budget) continue;
    if (value > best_value ||
        (value == best_value &&
         std::lexicographical_compare(current.begin(), current.end(), best.begin(), best.end()))) {
      best_value = value;
      best = current;
    }
  }
  return finish(by_id, best, Basis::actual);
}

double realized_net_benefit(std::span<const Candidate> candidates, std::span<const std::size_t> ids) {
  const auto by_id = sorted_by_id(candidates);
  std::vector<std::size_t> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (auto id : sorted) {
    auto it = std::lower_bound(by_id.begin(), by_id.end(), id,
                               [](const Candidate& c, std::size_t v) { return c.id < v; });
    if (it == by_id.end() || it->id != id) throw std::invalid_argument("unknown candidate id");
    total += it->true_benefit - it->true_cost;
  }
  return total;
}

double realized_cost(std::span<const Candidate> candidates, std::span<const std::size_t> ids) {
  const auto by_id = sorted_by_id(candidates);
  std::vector<std::size_t> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (auto id : sorted) {
    auto it = std::lower_bound(by_id.begin(), by_id.end(), id,
                               [](const Candidate& c, std::size_t v) { return c.id < v; });
    if (it == by_id.end() || it->id != id) throw std::invalid_argument("unknown candidate id");
    total += it->true_cost;
  }
  return total;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 2) return 1.0;
  const auto rx = midranks(x);
  const auto ry = midranks(y);
  const double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return (sxx == 0.0 && syy == 0.0) ? 1.0 : 0.0;
  if (sxx == syy && sxy == sxx) return 1.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TrialOutcome run_trial(const SimConfig& config, std::size_t trial_index) {
  TrialOutcome out;
  out.seed = derive_seed(config.master_seed, trial_index);
  const auto candidates = generate_portfolio(config, out.seed);

  const auto biased =
      select_projects(candidates, config.budget, Basis::estimated, config.selection_rule);
  const double spent = realized_cost(candidates, biased.ids);
  const auto oracle = select_projects(candidates, std::max(config.budget, spent), Basis::actual,
                                      config.selection_rule);

  out.biased_ids = biased.ids;
  out.oracle_ids = oracle.ids;
  out.biased_net = realized_net_benefit(candidates, biased.ids);
  out.oracle_net = realized_net_benefit(candidates, oracle.ids);
  if (out.oracle_net > 0.0) {
    out.regret = (out.oracle_net - out.biased_net) / out.oracle_net;
  } else {
    // Nothing worth funding: no loss unless the biased choice still lost money.
    out.regret = out.biased_net < out.oracle_net ? 1.0 : 0.0;
  }

  if (biased.ids.empty()) {
    out.overlap = oracle.ids.empty() ? 1.0 : 0.0;
  } else {
    std::vector<std::size_t> common;
    std::set_intersection(biased.ids.begin(), biased.ids.end(), oracle.ids.begin(),
                          oracle.ids.end(), std::back_inserter(common));
    out.overlap = static_cast<double>(common.size()) / static_cast<double>(biased.ids.size());
  }

  std::vector<double> est_bcr, true_bcr;
  for (const auto& c : candidates) {
    est_bcr.push_back(c.est_benefit / c.est_cost);
    true_bcr.push_back(c.true_benefit / c.true_cost);
  }
  out.rank_correlation = spearman(est_bcr, true_bcr);
  return out;
}

std::vector<TrialOutcome> run_trials_serial(const SimConfig& config) {
  config.validate();
  std::vector<TrialOutcome> out(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) out[t] = run_trial(config, t);
  return out;
}

std::vector<TrialOutcome> run_trials(const SimConfig& config) {
  config.validate();
  std::vector<TrialOutcome> out(config.trials);
  const auto n = static_cast<std::ptrdiff_t>(config.trials);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    out[static_cast<std::size_t>(t)] = run_trial(config, static_cast<std::size_t>(t));
  }
  return out;
}

SimResult aggregate(std::span<const TrialOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("no trials to aggregate");
  SimResult r;
  for (const auto& o : outcomes) {
    r.mean_regret += o.regret;
    r.mean_overlap += o.overlap;
    r.rank_correlation += o.rank_correlation;
  }
  const double n = static_cast<double>(outcomes.size());
  r.mean_regret /= n;
  r.mean_overlap /= n;
  r.rank_correlation /= n;
  r.trials = outcomes.size();
  r.seed_derivation = kSeedDerivationLabel;
  return r;
}

SimResult run_simulation(const SimConfig& config) { return aggregate(run_trials(config)); }

SimResult run_simulation_serial(const SimConfig& config) {
  return aggregate(run_trials_serial(config));
}

}  // namespace refcast
