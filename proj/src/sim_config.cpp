#include "refcast/sim_config.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "refcast/engine.h"

namespace refcast {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class Keys {
 public:
  explicit Keys(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string required(const std::string& key) {
    if (!has(key)) throw ConfigError("missing config key '" + key + "'");
    return text(key, {});
  }

  double real(const std::string& key, double fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    const auto s = text(key, {});
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError("config key '" + key + "' is not a number: '" + s + "'");
    }
    return v;
  }

  template <typename Int>
  Int integer(const std::string& key, Int fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    const auto s = text(key, {});
    Int v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw ConfigError("config key '" + key + "' is not a non-negative integer: '" + s + "'");
    }
    return v;
  }

  void reject_unused() const {
    for (const auto& [k, v] : values_)
      if (!used_.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

BiasSource read_source(Keys& keys, const std::string& prefix, const std::string& base_dir) {
  const auto source = keys.text(prefix + "source", "parametric");
  if (source == "parametric") {
    ParametricBias p;
    try {
      p.shape = parse_shape(keys.text(prefix + "shape", "constant"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(prefix + "shape: " + e.what());
    }
    p.mean = keys.real(prefix + "mean", 0.0);
    p.sd = keys.real(prefix + "sd", 0.0);
    return p;
  }
  if (source != "class") {
    throw ConfigError(prefix + "source must be 'parametric' or 'class', got '" + source + "'");
  }

  ClassCriteria criteria;
  try {
    if (keys.has(prefix + "type")) criteria.project_type = parse_project_type(keys.text(prefix + "type", {}));
    criteria.measure = parse_measure(keys.required(prefix + "measure"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(prefix + ": " + e.what());
  }
  criteria.regions = split_list(keys.text(prefix + "region", ""));
  if (keys.has(prefix + "from_year")) criteria.from_year = keys.integer<int>(prefix + "from_year", 0);
  if (keys.has(prefix + "to_year")) criteria.to_year = keys.integer<int>(prefix + "to_year", 0);

  std::filesystem::path path = keys.required(prefix + "dataset");
  if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
  const auto dataset = load_dataset(path.string());
  const auto rc = build_reference_class(dataset, criteria);
  return EmpiricalBias{rc.name, rc.sample};
}

}  // namespace

SimConfig parse_sim_config(std::string_view text, const std::string& base_dir) {
  std::map<std::string, std::string> values;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = trim(std::string_view(t).substr(0, eq));
    auto value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!values.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
    }
  }

  Keys keys(std::move(values));
  SimConfig c;
  c.n_candidates = keys.integer<std::size_t>("n_candidates", c.n_candidates);
  c.budget = keys.real("budget", c.budget);
  c.trials = keys.integer<std::size_t>("trials", c.trials);
  c.master_seed = keys.integer<std::uint64_t>("master_seed", c.master_seed);
  try {
    c.selection_rule = parse_selection_rule(keys.text("selection_rule", "greedy_bcr"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.true_cost_min = keys.real("true_cost_min", c.true_cost_min);
  c.true_cost_max = keys.real("true_cost_max", c.true_cost_max);
  c.true_benefit_min = keys.real("true_benefit_min", c.true_benefit_min);
  c.true_benefit_max = keys.real("true_benefit_max", c.true_benefit_max);
  c.bias_correlation = keys.real("bias_correlation", c.bias_correlation);
  c.cost_bias = read_source(keys, "cost_bias_", base_dir);
  c.benefit_bias = read_source(keys, "benefit_bias_", base_dir);
  keys.reject_unused();

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_sim_config(ss.str(), dir.empty() ? "." : dir.string());
}

}  // namespace refcast
