#include "refcast/cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "refcast/class_stats.h"
#include "refcast/engine.h"
#include "refcast/project_data.h"
#include "refcast/report.h"
#include "refcast/sample_data.h"
#include "refcast/selection_sim.h"
#include "refcast/sim_config.h"

namespace refcast {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ClassFlags {
  std::vector<std::string> types;
  std::vector<std::string> regions;
  std::optional<int> from_year;
  std::optional<int> to_year;
  std::string measure = "cost";
  std::string name;

  void attach(CLI::App* cmd, bool multiple_types) {
    if (multiple_types)
      cmd->add_option("--type", types, "Project type (repeat for several classes)");
    else
      cmd->add_option("--type", types, "Project type")->expected(1);
    cmd->add_option("--region", regions, "Region tag to include (repeatable)");
    cmd->add_option("--from-year", from_year, "Earliest decision year");
    cmd->add_option("--to-year", to_year, "Latest decision year");
    cmd->add_option("--measure", measure, "cost or traffic")->check(
        CLI::IsMember({"cost", "traffic", "cost_inaccuracy", "traffic_inaccuracy"}));
    cmd->add_option("--class-name", name, "Label for the reference class");
  }

  ClassCriteria criteria(const std::optional<std::string>& type) const {
    ClassCriteria c;
    try {
      if (type) c.project_type = parse_project_type(*type);
      c.measure = parse_measure(measure);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    c.regions = regions;
    c.from_year = from_year;
    c.to_year = to_year;
    if (from_year && to_year && *from_year > *to_year) throw UsageError("--from-year exceeds --to-year");
    return c;
  }

  ReferenceClass single(const Dataset& ds) const {
    return build_reference_class(
        ds, criteria(types.empty() ? std::nullopt : std::optional<std::string>(types.front())), name);
  }
};

// "a,b,c" or "start:stop:step" (inclusive of stop).
std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in --grid");
    }
  };
  auto tidy = [](double v) { return std::round(v * 1e12) / 1e12; };
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("--grid range must be start:stop:step");
    const double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || stop < start) throw UsageError("--grid range is empty");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(tidy(start + static_cast<double>(i) * step));
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  }
  if (grid.empty()) throw UsageError("--grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 1.0)) throw UsageError("--grid values must lie in (0, 1]");
    if (i && !(grid[i] > grid[i - 1])) throw UsageError("--grid must be strictly increasing");
  }
  return grid;
}

Json class_stats_json(const ReferenceClass& rc, double band, std::size_t reps, double level,
                      std::uint64_t seed) {
  Json j;
  j["name"] = rc.name;
  j["criteria"] = rc.criteria.label();
  const Json summary = to_json(summarize(rc.sample));
  for (const auto& [key, value] : summary.items()) j[key] = value;
  j["share_overrun"] = share_overrun(rc.sample);
  j["band"] = band;
  j["share_outside_band"] = share_outside_band(rc.sample, band);
  if (reps > 0) j["mean_ci"] = to_json(bootstrap_ci(rc.sample, BootstrapStatistic::mean(), level, reps, seed));
  return j;
}

int cmd_stats(const std::string& path, const ClassFlags& flags, double band, std::size_t reps,
              double level, std::uint64_t seed, std::ostream& out) {
  if (!(band > 0.0)) throw UsageError("--band must be positive");
  if (reps > 0 && !(level > 0.0 && level < 1.0)) throw UsageError("--level must lie in (0, 1)");
  const auto ds = load_dataset(path);

  std::vector<ReferenceClass> classes;
  if (flags.types.empty()) {
    classes.push_back(build_reference_class(ds, flags.criteria(std::nullopt), flags.name));
  } else {
    for (const auto& t : flags.types) {
      auto name = flags.types.size() == 1 ? flags.name : std::string{};
      classes.push_back(build_reference_class(ds, flags.criteria(t), name));
    }
  }

  Json j;
  j["dataset"] = path;
  j["classes"] = Json::array();
  for (const auto& rc : classes) j["classes"].push_back(class_stats_json(rc, band, reps, level, seed));
  if (classes.size() > 1) {
    ReferenceClass pooled;
    pooled.name = "pooled";
    pooled.criteria = classes.front().criteria;
    pooled.criteria.project_type.reset();
    for (const auto& rc : classes) {
      pooled.members.insert(pooled.members.end(), rc.members.begin(), rc.members.end());
      pooled.sample.insert(pooled.sample.end(), rc.sample.begin(), rc.sample.end());
    }
    j["pooled"] = class_stats_json(pooled, band, reps, level, seed);
    j["separation_tests"] = Json::array();
    for (std::size_t a = 0; a < classes.size(); ++a) {
      for (std::size_t b = a + 1; b < classes.size(); ++b) {
        if (classes[a].sample.size() < 2 || classes[b].sample.size() < 2) continue;
        Json t = to_json(separation_test(classes[a].sample, classes[b].sample));
        t["a"] = classes[a].name;
        t["b"] = classes[b].name;
        j["separation_tests"].push_back(t);
      }
    }
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_uplift(const std::string& path, const ClassFlags& flags, double risk, double base,
               double delay, bool clamp, std::size_t min_size, std::ostream& out, std::ostream& err) {
  if (!(risk > 0.0 && risk <= 1.0)) throw UsageError("--risk must lie in (0, 1]");
  if (!(base > 0.0)) throw UsageError("--base must be positive");
  if (!(delay >= 0.0)) throw UsageError("--delay-years must be non-negative");
  const auto ds = load_dataset(path);
  const auto rc = flags.single(ds);
  const auto report = reference_forecast(base, rc, risk, delay, clamp, min_size);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  out << to_json(report).dump(2) << '\n';
  return kExitOk;
}

int cmd_curve(const std::string& path, const ClassFlags& flags, const std::string& grid_spec,
              const std::string& format, bool histogram, double bin_width, std::ostream& out) {
  if (!(bin_width > 0.0)) throw UsageError("--bin-width must be positive");
  const auto grid = parse_grid(grid_spec);
  const auto ds = load_dataset(path);
  const auto rc = flags.single(ds);
  const bool cost = rc.criteria.measure == Measure::cost_inaccuracy;

  if (histogram) {
    if (format != "svg") throw UsageError("--histogram requires --format svg");
    std::map<std::string, std::vector<double>> by_region;
    for (std::size_t i = 0; i < rc.members.size(); ++i)
      by_region[ds.find(rc.members[i])->region].push_back(rc.sample[i]);
    std::vector<HistogramGroup> groups;
    for (auto& [region, values] : by_region) groups.push_back({region, std::move(values)});
    out << histogram_svg(groups, bin_width, "Inaccuracy distribution: " + rc.name,
                         cost ? "Cost overrun (%)" : "Traffic inaccuracy (%)");
    return kExitOk;
  }

  const auto curve = uplift_curve(EmpiricalDistribution(rc), grid);
  if (format == "csv")
    out << curve_csv(curve);
  else
    out << curve_svg(curve, "Required uplift by acceptable risk: " + rc.name);
  return kExitOk;
}

int cmd_simulate(const std::string& path, bool serial, std::ostream& out) {
  const auto config = load_sim_config(path);
  const auto result = serial ? run_simulation_serial(config) : run_simulation(config);
  out << to_json(result).dump(2) << '\n';
  return kExitOk;
}

int cmd_make_sample_data(std::uint64_t seed, const std::string& out_path, std::ostream& out,
                         std::ostream& err) {
  const auto ds = make_sample_dataset(seed);
  const auto text = serialize_dataset(ds);
  if (out_path.empty() || out_path == "-") {
    out << text;
    return kExitOk;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw DataError("cannot write '" + out_path + "'");
  file << text;
  file.close();
  if (!file) throw DataError("failed writing '" + out_path + "'");
  err << "wrote " << ds.records.size() << " records to " << out_path << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reference class forecasting: inaccuracy statistics, uplift curves, selection simulation"};
  app.name("refcast");
  app.require_subcommand(1);

  std::string path;
  ClassFlags flags;
  double band = 20.0;
  std::size_t reps = 0;
  double level = 0.95;
  std::uint64_t seed = 1;

  auto* stats = app.add_subcommand("stats", "Summary statistics per reference class as JSON");
  stats->add_option("dataset", path, "Project CSV")->required();
  flags.attach(stats, true);
  stats->add_option("--band", band, "Band for the share-outside-band statistic (percent)");
  stats->add_option("--bootstrap-reps", reps, "Add a percentile bootstrap CI of the mean");
  stats->add_option("--level", level, "Bootstrap confidence level");
  stats->add_option("--seed", seed, "Bootstrap seed");

  double risk = 0.0, base = 0.0, delay = 0.0;
  bool clamp = false;
  std::size_t min_size = kMinClassSizeWarning;
  auto* uplift = app.add_subcommand("uplift", "Reference class forecast for a base estimate as JSON");
  uplift->add_option("dataset", path, "Project CSV")->required();
  flags.attach(uplift, false);
  uplift->add_option("--risk", risk, "Maximum acceptable risk of overrun, in (0, 1]")->required();
  uplift->add_option("--base", base, "Base cost estimate")->required();
  uplift->add_option("--delay-years", delay, "Expected implementation delay in years");
  uplift->add_flag("--clamp", clamp, "Clamp negative uplifts to zero");
  uplift->add_option("--min-class-size", min_size, "Warn below this class size");

  std::string grid = "0.01:0.99:0.01";
  std::string format = "csv";
  bool histogram = false;
  double bin_width = kDefaultBinWidth;
  auto* curve = app.add_subcommand("curve", "Uplift curve as CSV or SVG, or an SVG histogram");
  curve->add_option("dataset", path, "Project CSV")->required();
  flags.attach(curve, false);
  curve->add_option("--grid", grid, "Risk grid: a,b,c or start:stop:step");
  curve->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
  curve->add_flag("--histogram", histogram, "Histogram of the class sample grouped by region");
  curve->add_option("--bin-width", bin_width, "Histogram bin width in percentage points");

  std::string config_path;
  bool serial = false;
  auto* simulate = app.add_subcommand("simulate", "Selection-distortion simulation as JSON");
  simulate->add_option("config", config_path, "Key-value config file")->required();
  simulate->add_flag("--serial", serial, "Use the single-threaded reference path");

  std::uint64_t sample_seed = kDefaultSampleSeed;
  std::string out_path;
  auto* make = app.add_subcommand("make-sample-data", "Write the synthetic reference dataset");
  make->add_option("--seed", sample_seed, "Generator seed");
  make->add_option("--out", out_path, "Output path (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*stats) return cmd_stats(path, flags, band, reps, level, seed, out);
    if (*uplift) return cmd_uplift(path, flags, risk, base, delay, clamp, min_size, out, err);
    if (*curve) return cmd_curve(path, flags, grid, format, histogram, bin_width, out);
    if (*simulate) return cmd_simulate(config_path, serial, out);
    if (*make) return cmd_make_sample_data(sample_seed, out_path, out, err);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace refcast
