#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "refcast/class_stats.h"
#include "refcast/engine.h"
#include "refcast/selection_sim.h"

namespace refcast {

using Json = nlohmann::ordered_json;

Json to_json(const ForecastReport& report);
Json to_json(const SimResult& result);
Json to_json(const SummaryStats& stats);
Json to_json(const TestResult& result);
Json to_json(const Interval& interval);

ForecastReport forecast_report_from_json(const Json& json);
SimResult sim_result_from_json(const Json& json);

// `acceptable_risk,uplift_pct` header plus one row per point.
std::string curve_csv(const UpliftCurve& curve);

// Fixed SVG geometry. Curve x maps risk 0..1 onto the plot width; y maps the
// polyline's data-ymin..data-ymax onto the plot height, top = data-ymax.
struct SvgLayout {
  static constexpr double width = 800.0;
  static constexpr double height = 500.0;
  static constexpr double left = 80.0;
  static constexpr double right = 30.0;
  static constexpr double top = 50.0;
  static constexpr double bottom = 70.0;
  static constexpr double plot_width = width - left - right;
  static constexpr double plot_height = height - top - bottom;
};

std::string curve_svg(const UpliftCurve& curve, const std::string& title);

struct HistogramGroup {
  std::string label;
  std::vector<double> values;
};

inline constexpr double kDefaultBinWidth = 10.0;

// Bars over all groups pooled, bins aligned to multiples of `bin_width`, plus
// one dashed mean marker per group.
std::string histogram_svg(std::span<const HistogramGroup> groups, double bin_width,
                          const std::string& title, const std::string& x_label);

}  // namespace refcast
