#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "refcast/selection_sim.h"

namespace refcast {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Flat `key = value` file, '#' starts a comment. Keys:
//
//   n_candidates, budget, trials, master_seed, selection_rule (greedy_bcr|exhaustive),
//   true_cost_min, true_cost_max, true_benefit_min, true_benefit_max, bias_correlation
//
// and for each of the prefixes cost_bias_ and benefit_bias_:
//
//   <p>source   parametric | class
//   <p>shape, <p>mean, <p>sd                      (parametric)
//   <p>dataset, <p>type, <p>region, <p>measure,
//   <p>from_year, <p>to_year                      (class; region is a comma list)
//
// Relative dataset paths resolve against `base_dir`. Unknown or repeated keys
// are errors. Missing datasets surface as DataError.
SimConfig parse_sim_config(std::string_view text, const std::string& base_dir = ".");
SimConfig load_sim_config(const std::string& path);

}  // namespace refcast
