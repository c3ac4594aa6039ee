#include "refcast/project_data.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace refcast {

namespace {

constexpr std::size_t kColumns = 12;

std::string row_prefix(std::size_t row) { return "row " + std::to_string(row) + ": "; }

// Splits one CSV line into fields. Supports RFC 4180 double-quoted fields
// (embedded commas and doubled quotes) but not quoted newlines.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      if (!current.empty()) throw DataError(row_prefix(row) + "stray quote inside unquoted field");
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (in_quotes) throw DataError(row_prefix(row) + "unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

double parse_double(const std::string& text, std::size_t row, std::string_view field) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw DataError(row_prefix(row) + "field '" + std::string(field) + "' is not a number: '" +
                    text + "'");
  }
  return value;
}

int parse_int(const std::string& text, std::size_t row, std::string_view field) {
  int value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw DataError(row_prefix(row) + "field '" + std::string(field) + "' is not an integer: '" +
                    text + "'");
  }
  return value;
}

std::optional<double> optional_double(const std::string& text, std::size_t row,
                                      std::string_view field) {
  if (text.empty()) return std::nullopt;
  return parse_double(text, row, field);
}

std::string quote_if_needed(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string optional_text(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string{};
}

}  // namespace

std::string_view to_string(ProjectType type) {
  switch (type) {
    case ProjectType::rail: return "rail";
    case ProjectType::road: return "road";
    case ProjectType::bridge_tunnel: return "bridge_tunnel";
    case ProjectType::other: return "other";
  }
  return "other";
}

ProjectType parse_project_type(std::string_view text) {
  if (text == "rail") return ProjectType::rail;
  if (text == "road") return ProjectType::road;
  if (text == "bridge_tunnel") return ProjectType::bridge_tunnel;
  if (text == "other") return ProjectType::other;
  throw std::invalid_argument("unknown project_type '" + std::string(text) +
                              "' (expected rail, road, bridge_tunnel or other)");
}

const ProjectRecord* Dataset::find(std::string_view id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::vector<Violation> validate_record(const ProjectRecord& record) {
  std::vector<Violation> out;
  auto positive = [&](const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) out.push_back({field, "must be a positive finite amount"});
  };
  if (record.id.empty()) out.push_back({"id", "must not be empty"});
  positive("estimated_cost", record.estimated_cost);
  if (record.actual_cost) positive("actual_cost", *record.actual_cost);
  if (record.estimated_traffic) positive("estimated_traffic", *record.estimated_traffic);
  if (record.actual_traffic) positive("actual_traffic", *record.actual_traffic);
  if (record.estimated_traffic.has_value() != record.actual_traffic.has_value()) {
    out.push_back({record.actual_traffic ? "estimated_traffic" : "actual_traffic",
                   "traffic fields must be present or absent as a pair"});
  }
  if (record.completion_year && *record.completion_year < record.decision_year) {
    out.push_back({"completion_year", "must not precede decision_year"});
  }
  return out;
}

Dataset parse_dataset(std::string_view csv_text, std::string provenance) {
  if (csv_text.substr(0, 3) == "\xEF\xBB\xBF") csv_text.remove_prefix(3);

  Dataset dataset;
  dataset.provenance = std::move(provenance);
  std::unordered_set<std::string> ids;

  bool header_seen = false;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos <= csv_text.size()) {
    std::size_t end = csv_text.find('\n', pos);
    if (end == std::string_view::npos) end = csv_text.size();
    std::string_view line = csv_text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!header_seen) {
      if (line != kCsvHeader) {
        throw DataError("header mismatch: expected '" + std::string(kCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    ++row;

    auto f = split_csv_line(line, row);
    if (f.size() != kColumns) {
      throw DataError(row_prefix(row) + "expected " + std::to_string(kColumns) + " columns, got " +
                      std::to_string(f.size()));
    }

    ProjectRecord r;
    r.id = f[0];
    r.name = f[1];
    try {
      r.project_type = parse_project_type(f[2]);
    } catch (const std::invalid_argument& e) {
      throw DataError(row_prefix(row) + e.what());
    }
    r.region = f[3];
    r.decision_year = parse_int(f[4], row, "decision_year");
    if (!f[5].empty()) r.completion_year = parse_int(f[5], row, "completion_year");
    r.estimated_cost = parse_double(f[6], row, "estimated_cost");
    r.actual_cost = optional_double(f[7], row, "actual_cost");
    r.cost_unit = f[8];
    r.estimated_traffic = optional_double(f[9], row, "estimated_traffic");
    r.actual_traffic = optional_double(f[10], row, "actual_traffic");
    r.traffic_unit = f[11];

    auto violations = validate_record(r);
    if (!violations.empty()) {
      const auto& v = violations.front();
      throw DataError(row_prefix(row) + "invariant violated: " + v.field + " " + v.rule);
    }
    if (!ids.insert(r.id).second) throw DataError(row_prefix(row) + "duplicate id '" + r.id + "'");
    dataset.records.push_back(std::move(r));
  }

  if (!header_seen) throw DataError("empty input: missing header");
  if (dataset.records.empty()) throw DataError("dataset contains no records");
  return dataset;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), path);
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const auto& r : dataset.records) {
    out += quote_if_needed(r.id);
    out += ',' + quote_if_needed(r.name);
    out += ',' + std::string(to_string(r.project_type));
    out += ',' + quote_if_needed(r.region);
    out += ',' + std::to_string(r.decision_year);
    out += ',' + (r.completion_year ? std::to_string(*r.completion_year) : std::string{});
    out += ',' + format_number(r.estimated_cost);
    out += ',' + optional_text(r.actual_cost);
    out += ',' + quote_if_needed(r.cost_unit);
    out += ',' + optional_text(r.estimated_traffic);
    out += ',' + optional_text(r.actual_traffic);
    out += ',' + quote_if_needed(r.traffic_unit);
    out.push_back('\n');
  }
  return out;
}

double cost_inaccuracy(const ProjectRecord& record) {
  if (!record.actual_cost) {
    throw IncompleteRecord("incomplete record '" + record.id + "': actual_cost is absent");
  }
  return 100.0 * (*record.actual_cost - record.estimated_cost) / record.estimated_cost;
}

double traffic_inaccuracy(const ProjectRecord& record) {
  if (!record.has_traffic_outcome()) {
    throw IncompleteRecord("incomplete record '" + record.id + "': traffic pair is absent");
  }
  return 100.0 * (*record.actual_traffic - *record.estimated_traffic) / *record.estimated_traffic;
}

}  // namespace refcast
