#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace refcast {

enum class ProjectType { rail, road, bridge_tunnel, other };

std::string_view to_string(ProjectType type);
// Throws std::invalid_argument for anything outside {rail, road, bridge_tunnel, other}.
ProjectType parse_project_type(std::string_view text);

// One completed (or still open) project. Money and traffic are in whatever
// constant-price unit the supplier used; the tool never deflates or converts.
struct ProjectRecord {
  std::string id;
  std::string name;
  ProjectType project_type = ProjectType::other;
  std::string region;
  int decision_year = 0;
  std::optional<int> completion_year;
  double estimated_cost = 0.0;
  std::optional<double> actual_cost;
  std::string cost_unit;
  std::optional<double> estimated_traffic;
  std::optional<double> actual_traffic;
  std::string traffic_unit;

  bool has_cost_outcome() const { return actual_cost.has_value(); }
  bool has_traffic_outcome() const {
    return estimated_traffic.has_value() && actual_traffic.has_value();
  }

  bool operator==(const ProjectRecord&) const = default;
};

struct Dataset {
  std::vector<ProjectRecord> records;
  std::string provenance;

  const ProjectRecord* find(std::string_view id) const;

  bool operator==(const Dataset&) const = default;
};

// Bad input data: malformed CSV, violated invariants, missing outcomes.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteRecord : public DataError {
 public:
  using DataError::DataError;
};

struct Violation {
  std::string field;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "id,name,project_type,region,decision_year,completion_year,estimated_cost,"
    "actual_cost,cost_unit,estimated_traffic,actual_traffic,traffic_unit";

// Empty list iff every record invariant holds.
std::vector<Violation> validate_record(const ProjectRecord& record);

// All-or-nothing: the first bad row aborts the parse with a DataError naming
// the 1-based data row (the header is not counted).
Dataset parse_dataset(std::string_view csv_text, std::string provenance = {});
Dataset load_dataset(const std::string& path);

std::string serialize_dataset(const Dataset& dataset);

// 100 * (actual - estimated) / estimated; positive means overrun.
double cost_inaccuracy(const ProjectRecord& record);
// 100 * (actual - estimated) / estimated; negative means shortfall.
double traffic_inaccuracy(const ProjectRecord& record);

// Shortest text that reads back to the same double.
std::string format_number(double value);

}  // namespace refcast
