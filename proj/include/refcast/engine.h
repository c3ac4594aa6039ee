#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refcast/project_data.h"

namespace refcast {

enum class Measure { cost_inaccuracy, traffic_inaccuracy };

std::string_view to_string(Measure measure);
// Accepts "cost"/"traffic" as well as the full names.
Measure parse_measure(std::string_view text);

// Every present filter must match. Empty `regions` matches any region.
struct ClassCriteria {
  std::optional<ProjectType> project_type;
  std::vector<std::string> regions;
  std::optional<int> from_year;  // decision year, inclusive
  std::optional<int> to_year;
  Measure measure = Measure::cost_inaccuracy;

  bool matches(const ProjectRecord& record) const;
  // e.g. "rail/UK/cost_inaccuracy"
  std::string label() const;
};

struct ReferenceClass {
  std::string name;
  ClassCriteria criteria;
  std::vector<std::string> members;
  std::vector<double> sample;  // the measure, aligned with members
};

class EmptyReferenceClass : public DataError {
 public:
  using DataError::DataError;
};

// Records matching all criteria and carrying the measured outcome. Throws
// EmptyReferenceClass when nothing qualifies.
ReferenceClass build_reference_class(const Dataset& dataset, const ClassCriteria& criteria,
                                     std::string name = {});

// The class definitions reproduced by the bundled dataset ("other" excluded).
struct NamedCriteria {
  std::string name;
  ClassCriteria criteria;
};
std::vector<NamedCriteria> bundled_classes();

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::span<const double> sample);
  explicit EmpiricalDistribution(const ReferenceClass& reference_class);

  std::span<const double> sorted_sample() const { return sorted_; }
  std::size_t n() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

EmpiricalDistribution empirical_distribution(const ReferenceClass& reference_class);

double quantile(const EmpiricalDistribution& dist, double q);

// Uplift u with empirical P(overrun > u) <= acceptable_risk, i.e. the
// (1 - risk) quantile. Risk must lie in (0, 1].
double required_uplift(const EmpiricalDistribution& dist, double acceptable_risk);

struct UpliftPoint {
  double acceptable_risk = 0.0;
  double uplift_pct = 0.0;
};

struct UpliftCurve {
  std::vector<UpliftPoint> points;  // risk ascending, uplift non-increasing
};

UpliftCurve uplift_curve(const EmpiricalDistribution& dist, std::span<const double> risk_grid);

struct ForecastAdjustment {
  double base_estimate = 0.0;
  double uplift_pct = 0.0;
  double uplift_amount = 0.0;
  double adjusted_estimate = 0.0;
  bool clamped = false;
};

ForecastAdjustment adjust_forecast(double base_estimate, double uplift_pct, bool clamp_negative);

// Growth of cost overrun with implementation delay, percentage points per year.
inline constexpr double kDelayOverrunPerYear = 4.64;

struct DelayAdjustment {
  double extra_overrun_pct = 0.0;
  double extra_cost = 0.0;
};

DelayAdjustment delay_adjustment(double base_estimate, double delay_years);

inline constexpr std::size_t kMinClassSizeWarning = 10;

struct ForecastReport {
  double base_estimate = 0.0;
  std::string class_name;
  double acceptable_risk = 0.0;
  double uplift_pct = 0.0;
  double uplift_amount = 0.0;
  double adjusted_estimate = 0.0;
  bool clamped = false;
  std::vector<std::string> warnings;  // not serialized; routed to diagnostics
};

// Class uplift at the acceptable risk plus the delay term, applied to the base.
ForecastReport reference_forecast(double base_estimate, const ReferenceClass& reference_class,
                                  double acceptable_risk, double delay_years, bool clamp_negative,
                                  std::size_t min_class_size = kMinClassSizeWarning);

}  // namespace refcast
