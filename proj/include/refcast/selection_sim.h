#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace refcast {

// Resampling with replacement from an observed inaccuracy sample.
struct EmpiricalBias {
  std::string label;
  std::vector<double> sample;
};

// Parametric inaccuracy in percent. `lognormal` places a lognormal on
// 100 + x with the requested mean and sd, so draws stay above -100.
struct ParametricBias {
  enum class Shape { constant, normal, lognormal };
  Shape shape = Shape::constant;
  double mean = 0.0;
  double sd = 0.0;
};

using BiasSource = std::variant<EmpiricalBias, ParametricBias>;

enum class SelectionRule { greedy_bcr, exhaustive };
enum class Basis { estimated, actual };

std::string_view to_string(SelectionRule rule);
SelectionRule parse_selection_rule(std::string_view text);
std::string_view to_string(ParametricBias::Shape shape);
ParametricBias::Shape parse_shape(std::string_view text);

inline constexpr std::size_t kExhaustiveLimit = 20;

struct SimConfig {
  std::size_t n_candidates = 12;
  double budget = 0.0;
  BiasSource cost_bias = ParametricBias{};
  BiasSource benefit_bias = ParametricBias{};
  double true_cost_min = 100.0;
  double true_cost_max = 1000.0;
  double true_benefit_min = 100.0;
  double true_benefit_max = 2000.0;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 0;
  SelectionRule selection_rule = SelectionRule::greedy_bcr;
  // Correlation of the normal scores behind the cost and benefit draws.
  double bias_correlation = 0.0;

  // Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

struct Candidate {
  std::size_t id = 0;
  double true_cost = 0.0;
  double true_benefit = 0.0;
  double est_cost = 0.0;
  double est_benefit = 0.0;
  double sampled_cost_overrun = 0.0;
  double sampled_benefit_inaccuracy = 0.0;

  bool operator==(const Candidate&) const = default;
};

struct Selection {
  std::vector<std::size_t> ids;  // ascending
  double total_cost = 0.0;       // on the basis used for selection
  double total_benefit = 0.0;

  bool operator==(const Selection&) const = default;
};

std::vector<Candidate> generate_portfolio(const SimConfig& config, std::uint64_t trial_seed);

// Candidates whose benefit does not exceed their cost on `basis` are never
// admitted. greedy_bcr fills the budget in descending benefit-cost order (ties
// by id), skipping what does not fit; exhaustive maximizes total net benefit
// with ties going to the lexicographically smallest id set.
Selection select_projects(std::span<const Candidate> candidates, double budget, Basis basis,
                          SelectionRule rule);

// Plain 2^n enumeration on true values; the reference for select_projects.
Selection brute_force_optimal(std::span<const Candidate> candidates, double budget);

// Sum of true_benefit - true_cost over `ids` in ascending order.
double realized_net_benefit(std::span<const Candidate> candidates,
                            std::span<const std::size_t> ids);
double realized_cost(std::span<const Candidate> candidates, std::span<const std::size_t> ids);

// Spearman correlation (Pearson on midranks).
double spearman(std::span<const double> x, std::span<const double> y);

struct TrialOutcome {
  std::uint64_t seed = 0;
  double regret = 0.0;
  double overlap = 0.0;
  double rank_correlation = 0.0;
  double biased_net = 0.0;
  double oracle_net = 0.0;
  std::vector<std::size_t> biased_ids;
  std::vector<std::size_t> oracle_ids;

  bool operator==(const TrialOutcome&) const = default;
};

struct SimResult {
  double mean_regret = 0.0;
  double mean_overlap = 0.0;
  double rank_correlation = 0.0;
  std::size_t trials = 0;
  std::string seed_derivation;

  bool operator==(const SimResult&) const = default;
};

// One trial: select on estimates, then let an oracle with true values and the
// same rule choose under a budget widened to what the biased portfolio really
// cost, so the biased set is always oracle-feasible.
TrialOutcome run_trial(const SimConfig& config, std::size_t trial_index);

std::vector<TrialOutcome> run_trials(const SimConfig& config);
std::vector<TrialOutcome> run_trials_serial(const SimConfig& config);

SimResult aggregate(std::span<const TrialOutcome> outcomes);

SimResult run_simulation(const SimConfig& config);
SimResult run_simulation_serial(const SimConfig& config);

}  // namespace refcast
