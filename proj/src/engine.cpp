#include "refcast/engine.h"

#include <algorithm>
#include <stdexcept>

#include "refcast/quantile.h"

namespace refcast {

std::string_view to_string(Measure measure) {
  return measure == Measure::cost_inaccuracy ? "cost_inaccuracy" : "traffic_inaccuracy";
}

Measure parse_measure(std::string_view text) {
  if (text == "cost" || text == "cost_inaccuracy") return Measure::cost_inaccuracy;
  if (text == "traffic" || text == "traffic_inaccuracy") return Measure::traffic_inaccuracy;
  throw std::invalid_argument("unknown measure '" + std::string(text) +
                              "' (expected cost or traffic)");
}

bool ClassCriteria::matches(const ProjectRecord& record) const {
  if (project_type && record.project_type != *project_type) return false;
  if (!regions.empty() &&
      std::find(regions.begin(), regions.end(), record.region) == regions.end()) {
    return false;
  }
  if (from_year && record.decision_year < *from_year) return false;
  if (to_year && record.decision_year > *to_year) return false;
  return true;
}

std::string ClassCriteria::label() const {
  std::string out = project_type ? std::string(to_string(*project_type)) : "any";
  if (!regions.empty()) {
    out += '/';
    for (std::size_t i = 0; i < regions.size(); ++i) out += (i ? "+" : "") + regions[i];
  }
  if (from_year || to_year) {
    out += '/' + (from_year ? std::to_string(*from_year) : std::string{}) + '-' +
           (to_year ? std::to_string(*to_year) : std::string{});
  }
  out += '/';
  out += to_string(measure);
  return out;
}

ReferenceClass build_reference_class(const Dataset& dataset, const ClassCriteria& criteria,
                                     std::string name) {
  if (criteria.from_year && criteria.to_year && *criteria.from_year > *criteria.to_year) {
    throw std::invalid_argument("decision-year range is empty (from > to)");
  }
  ReferenceClass rc;
  rc.name = name.empty() ? criteria.label() : std::move(name);
  rc.criteria = criteria;
  const bool cost = criteria.measure == Measure::cost_inaccuracy;
  for (const auto& record : dataset.records) {
    if (!criteria.matches(record)) continue;
    if (cost ? !record.has_cost_outcome() : !record.has_traffic_outcome()) continue;
    rc.members.push_back(record.id);
    rc.sample.push_back(cost ? cost_inaccuracy(record) : traffic_inaccuracy(record));
  }
  if (rc.members.empty()) {
    throw EmptyReferenceClass("empty reference class '" + rc.name + "': no record with outcomes matches");
  }
  return rc;
}

std::vector<NamedCriteria> bundled_classes() {
  auto make = [](ProjectType type, Measure measure, std::vector<std::string> regions = {}) {
    ClassCriteria c;
    c.project_type = type;
    c.measure = measure;
    c.regions = std::move(regions);
    return c;
  };
  return {
      {"rail_cost", make(ProjectType::rail, Measure::cost_inaccuracy)},
      {"bridge_tunnel_cost", make(ProjectType::bridge_tunnel, Measure::cost_inaccuracy)},
      {"road_cost", make(ProjectType::road, Measure::cost_inaccuracy)},
      {"rail_traffic", make(ProjectType::rail, Measure::traffic_inaccuracy)},
      {"road_traffic", make(ProjectType::road, Measure::traffic_inaccuracy)},
      {"uk_rail_cost", make(ProjectType::rail, Measure::cost_inaccuracy, {"UK"})},
  };
}

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> sample)
    : sorted_(sample.begin(), sample.end()) {
  if (sorted_.empty()) throw std::invalid_argument("empirical distribution of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

EmpiricalDistribution::EmpiricalDistribution(const ReferenceClass& reference_class)
    : EmpiricalDistribution(std::span<const double>(reference_class.sample)) {}

EmpiricalDistribution empirical_distribution(const ReferenceClass& reference_class) {
  return EmpiricalDistribution(reference_class);
}

double quantile(const EmpiricalDistribution& dist, double q) {
  return interpolated_quantile(dist.sorted_sample(), q);
}

double required_uplift(const EmpiricalDistribution& dist, double acceptable_risk) {
  if (!(acceptable_risk > 0.0 && acceptable_risk <= 1.0)) {
    throw std::invalid_argument("acceptable risk must lie in (0, 1]");
  }
  return quantile(dist, 1.0 - acceptable_risk);
}

UpliftCurve uplift_curve(const EmpiricalDistribution& dist, std::span<const double> risk_grid) {
  if (risk_grid.empty()) throw std::invalid_argument("risk grid is empty");
  UpliftCurve curve;
  curve.points.reserve(risk_grid.size());
  for (std::size_t i = 0; i < risk_grid.size(); ++i) {
    if (i > 0 && !(risk_grid[i] > risk_grid[i - 1])) {
      throw std::invalid_argument("risk grid must be strictly increasing");
    }
    curve.points.push_back({risk_grid[i], required_uplift(dist, risk_grid[i])});
  }
  return curve;
}

ForecastAdjustment adjust_forecast(double base_estimate, double uplift_pct, bool clamp_negative) {
  if (!(base_estimate > 0.0)) throw std::invalid_argument("base estimate must be positive");
  ForecastAdjustment out;
  out.base_estimate = base_estimate;
  out.uplift_pct = uplift_pct;
  if (clamp_negative && uplift_pct < 0.0) {
    out.uplift_pct = 0.0;
    out.clamped = true;
  }
  out.uplift_amount = base_estimate * out.uplift_pct / 100.0;
  out.adjusted_estimate = base_estimate + out.uplift_amount;
  return out;
}

DelayAdjustment delay_adjustment(double base_estimate, double delay_years) {
  if (!(base_estimate > 0.0)) throw std::invalid_argument("base estimate must be positive");
  if (!(delay_years >= 0.0)) throw std::invalid_argument("delay must be non-negative");
  DelayAdjustment out;
  out.extra_overrun_pct = kDelayOverrunPerYear * delay_years;
  out.extra_cost = base_estimate * out.extra_overrun_pct / 100.0;
  return out;
}

ForecastReport reference_forecast(double base_estimate, const ReferenceClass& reference_class,
                                  double acceptable_risk, double delay_years, bool clamp_negative,
                                  std::size_t min_class_size) {
  if (reference_class.sample.empty()) {
    throw EmptyReferenceClass("empty reference class '" + reference_class.name + "'");
  }
  const EmpiricalDistribution dist(reference_class);
  const double class_uplift = required_uplift(dist, acceptable_risk);
  const double delay = delay_adjustment(base_estimate, delay_years).extra_overrun_pct;
  const auto adj = adjust_forecast(base_estimate, class_uplift + delay, clamp_negative);

  ForecastReport report;
  report.base_estimate = adj.base_estimate;
  report.class_name = reference_class.name;
  report.acceptable_risk = acceptable_risk;
  report.uplift_pct = adj.uplift_pct;
  report.uplift_amount = adj.uplift_amount;
  report.adjusted_estimate = adj.adjusted_estimate;
  report.clamped = adj.clamped;
  if (dist.n() < min_class_size) {
    report.warnings.push_back("reference class '" + reference_class.name + "' has only " +
                              std::to_string(dist.n()) + " members (< " +
                              std::to_string(min_class_size) + ")");
  }
  return report;
}

}  // namespace refcast
