#include "refcast/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace refcast {

Json to_json(const ForecastReport& r) {
  Json j;
  j["base_estimate"] = r.base_estimate;
  j["class_name"] = r.class_name;
  j["acceptable_risk"] = r.acceptable_risk;
  j["uplift_pct"] = r.uplift_pct;
  j["uplift_amount"] = r.uplift_amount;
  j["adjusted_estimate"] = r.adjusted_estimate;
  j["clamped"] = r.clamped;
  return j;
}

Json to_json(const SimResult& r) {
  Json j;
  j["mean_regret"] = r.mean_regret;
  j["mean_overlap"] = r.mean_overlap;
  j["rank_correlation"] = r.rank_correlation;
  j["trials"] = r.trials;
  j["seed_derivation"] = r.seed_derivation;
  return j;
}

Json to_json(const SummaryStats& s) {
  Json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["sd"] = s.sd ? Json(*s.sd) : Json(nullptr);
  return j;
}

Json to_json(const TestResult& t) {
  Json j;
  j["statistic"] = t.statistic;
  j["p_value"] = t.p_value;
  j["method"] = t.method;
  return j;
}

Json to_json(const Interval& i) {
  Json j;
  j["lower"] = i.lower;
  j["upper"] = i.upper;
  j["level"] = i.level;
  return j;
}

ForecastReport forecast_report_from_json(const Json& j) {
  ForecastReport r;
  r.base_estimate = j.at("base_estimate").get<double>();
  r.class_name = j.at("class_name").get<std::string>();
  r.acceptable_risk = j.at("acceptable_risk").get<double>();
  r.uplift_pct = j.at("uplift_pct").get<double>();
  r.uplift_amount = j.at("uplift_amount").get<double>();
  r.adjusted_estimate = j.at("adjusted_estimate").get<double>();
  r.clamped = j.at("clamped").get<bool>();
  return r;
}

SimResult sim_result_from_json(const Json& j) {
  SimResult r;
  r.mean_regret = j.at("mean_regret").get<double>();
  r.mean_overlap = j.at("mean_overlap").get<double>();
  r.rank_correlation = j.at("rank_correlation").get<double>();
  r.trials = j.at("trials").get<std::size_t>();
  r.seed_derivation = j.at("seed_derivation").get<std::string>();
  return r;
}

std::string curve_csv(const UpliftCurve& curve) {
  std::string out = "acceptable_risk,uplift_pct\n";
  for (const auto& p : curve.points) {
    out += format_number(p.acceptable_risk) + ',' + format_number(p.uplift_pct) + '\n';
  }
  return out;
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Axis range padded out to multiples of `step`.
std::pair<double, double> nice_range(double lo, double hi, double step) {
  double a = std::floor(lo / step) * step;
  double b = std::ceil(hi / step) * step;
  if (b <= a) {
    a -= step;
    b += step;
  }
  return {a, b};
}

double tick_step(double span) {
  const double raw = span / 8.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

using L = SvgLayout;

void open_svg(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << L::width << "\" height=\""
     << L::height << "\" viewBox=\"0 0 " << L::width << ' ' << L::height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << L::width << "\" height=\"" << L::height
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << L::width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << escape_xml(title) << "</text>\n";
}

void axes(std::ostringstream& os, const std::string& x_label, const std::string& y_label) {
  const double x0 = L::left, y0 = L::top + L::plot_height;
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 + L::plot_width << "\" y2=\""
     << y0 << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << x0 << "\" y1=\"" << L::top << "\" x2=\"" << x0 << "\" y2=\"" << y0
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L::left + L::plot_width / 2 << "\" y=\"" << L::height - 20
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"20\" y=\"" << L::top + L::plot_height / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 "
     << L::top + L::plot_height / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
}

void x_tick(std::ostringstream& os, double x, const std::string& label) {
  const double y0 = L::top + L::plot_height;
  os << "<line x1=\"" << fixed2(x) << "\" y1=\"" << y0 << "\" x2=\"" << fixed2(x) << "\" y2=\""
     << y0 + 5 << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fixed2(x) << "\" y=\"" << y0 + 20
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label
     << "</text>\n";
}

void y_tick(std::ostringstream& os, double y, const std::string& label) {
  os << "<line x1=\"" << L::left - 5 << "\" y1=\"" << fixed2(y) << "\" x2=\"" << L::left
     << "\" y2=\"" << fixed2(y) << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L::left - 8 << "\" y=\"" << fixed2(y + 4)
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label
     << "</text>\n";
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-9 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string curve_svg(const UpliftCurve& curve, const std::string& title) {
  if (curve.points.empty()) throw std::invalid_argument("empty curve");
  double lo = curve.points.front().uplift_pct, hi = lo;
  for (const auto& p : curve.points) {
    lo = std::min(lo, p.uplift_pct);
    hi = std::max(hi, p.uplift_pct);
  }
  const auto [ymin, ymax] = nice_range(lo, hi, 10.0);
  auto px = [](double risk) { return L::left + risk * L::plot_width; };
  auto py = [&](double v) { return L::top + (ymax - v) / (ymax - ymin) * L::plot_height; };

  std::ostringstream os;
  open_svg(os, title);
  axes(os, "Maximum acceptable risk of cost overrun (%)", "Required uplift (%)");
  for (int k = 0; k <= 10; ++k) x_tick(os, px(k / 10.0), std::to_string(k * 10));
  const double step = tick_step(ymax - ymin);
  for (double v = ymin; v <= ymax + 1e-9; v += step) y_tick(os, py(v), tick_label(v));

  os << "<polyline class=\"uplift-curve\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" "
        "data-ymin=\""
     << format_number(ymin) << "\" data-ymax=\"" << format_number(ymax) << "\" points=\"";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    os << (i ? " " : "") << fixed2(px(p.acceptable_risk)) << ',' << fixed2(py(p.uplift_pct));
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string histogram_svg(std::span<const HistogramGroup> groups, double bin_width,
                          const std::string& title, const std::string& x_label) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
  std::vector<double> all;
  for (const auto& g : groups) all.insert(all.end(), g.values.begin(), g.values.end());
  if (all.empty()) throw std::invalid_argument("histogram of an empty sample");

  const auto [mn, mx] = std::minmax_element(all.begin(), all.end());
  const double first = std::floor(*mn / bin_width) * bin_width;
  auto bins = static_cast<std::size_t>(std::floor((*mx - first) / bin_width)) + 1;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : all) {
    auto b = static_cast<std::size_t>(std::floor((v - first) / bin_width));
    counts[std::min(b, bins - 1)]++;
  }
  const double xmin = first, xmax = first + static_cast<double>(bins) * bin_width;
  const double cmax = static_cast<double>(*std::max_element(counts.begin(), counts.end()));
  const double ymax = std::max(1.0, std::ceil(cmax * 1.15));
  auto px = [&](double v) { return L::left + (v - xmin) / (xmax - xmin) * L::plot_width; };
  auto py = [&](double c) { return L::top + (ymax - c) / ymax * L::plot_height; };

  std::ostringstream os;
  open_svg(os, title);
  axes(os, x_label, "Number of projects");
  for (std::size_t b = 0; b < bins; ++b) {
    const double x0 = px(xmin + static_cast<double>(b) * bin_width);
    const double x1 = px(xmin + static_cast<double>(b + 1) * bin_width);
    const double y = py(static_cast<double>(counts[b]));
    os << "<rect class=\"bar\" x=\"" << fixed2(x0 + 1) << "\" y=\"" << fixed2(y) << "\" width=\""
       << fixed2(std::max(x1 - x0 - 2, 0.5)) << "\" height=\"" << fixed2(L::top + L::plot_height - y)
       << "\" fill=\"#8aa9d6\" data-count=\"" << counts[b] << "\"/>\n";
  }
  const double xstep = tick_step(xmax - xmin);
  for (double v = std::ceil(xmin / xstep) * xstep; v <= xmax + 1e-9; v += xstep)
    x_tick(os, px(v), tick_label(v));
  const double cstep = std::max(1.0, tick_step(ymax));
  for (double c = 0; c <= ymax + 1e-9; c += cstep) y_tick(os, py(c), tick_label(c));

  static constexpr const char* colors[] = {"#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50"};
  std::size_t k = 0;
  for (const auto& g : groups) {
    if (g.values.empty()) continue;
    const double mean =
        std::accumulate(g.values.begin(), g.values.end(), 0.0) / static_cast<double>(g.values.size());
    const double x = px(mean);
    const char* color = colors[k % std::size(colors)];
    os << "<line class=\"mean-marker\" data-group=\"" << escape_xml(g.label) << "\" data-mean=\""
       << format_number(mean) << "\" x1=\"" << fixed2(x) << "\" y1=\"" << L::top << "\" x2=\""
       << fixed2(x) << "\" y2=\"" << L::top + L::plot_height << "\" stroke=\"" << color
       << "\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
    char label[160];
    std::snprintf(label, sizeof label, "%s mean %.1f%%", g.label.c_str(), mean);
    os << "<text x=\"" << fixed2(x + 4) << "\" y=\"" << L::top + 14 + 16.0 * static_cast<double>(k)
       << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
       << escape_xml(label) << "</text>\n";
    ++k;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace refcast
