#include "doctest.h"
#include "refcast/class_stats.h"
#include "refcast/engine.h"
#include "refcast/sample_data.h"

using namespace refcast;

namespace {

ReferenceClass target_class(const Dataset& ds, const ClassTarget& t) {
  ClassCriteria c;
  c.project_type = t.type;
  c.measure = t.traffic ? Measure::traffic_inaccuracy : Measure::cost_inaccuracy;
  return build_reference_class(ds, c);
}

void check_targets(const Dataset& ds) {
  std::vector<double> all_cost;
  for (const auto& t : kClassTargets) {
    const auto rc = target_class(ds, t);
    const auto s = summarize(rc.sample);
    CHECK(s.n == t.n);
    CHECK(std::abs(s.mean - t.mean) <= 0.05);
    CHECK(std::abs(*s.sd - t.sd) <= 0.05);
    if (!t.traffic) all_cost.insert(all_cost.end(), rc.sample.begin(), rc.sample.end());
  }
  const double overrun = share_overrun(all_cost);
  CHECK(overrun >= 0.88);
  CHECK(overrun <= 0.92);

  const auto rail_traffic = target_class(ds, kClassTargets[3]);
  CHECK(std::abs(share_outside_band(rail_traffic.sample, 20) - 0.84) <= 1.0 / 25.0);
  const auto road_traffic = target_class(ds, kClassTargets[4]);
  CHECK(std::abs(share_outside_band(road_traffic.sample, 20) - 0.50) <= 0.03);

  ClassCriteria uk;
  uk.project_type = ProjectType::rail;
  uk.regions = {"UK"};
  const auto uk_class = build_reference_class(ds, uk);
  CHECK(uk_class.sample.size() == kUkRailCount);
  const EmpiricalDistribution d(uk_class);
  CHECK(required_uplift(d, 0.5) == kUkRailMedianUplift);
  CHECK(required_uplift(d, 0.1) == kUkRailP90Uplift);

  std::size_t joint = 0;
  for (const auto& r : ds.records)
    if (r.project_type == ProjectType::rail && r.has_cost_outcome() && r.has_traffic_outcome()) ++joint;
  CHECK(joint == kRailJointCount);
}

}  // namespace

TEST_CASE("default seed hits every class target") { check_targets(make_sample_dataset()); }

TEST_CASE("other seeds produce different records with the same class targets") {
  const auto base = make_sample_dataset();
  for (std::uint64_t seed : {1u, 2u, 3u, 99u, 123456u}) {
    const auto ds = make_sample_dataset(seed);
    CHECK(ds.records != base.records);
    check_targets(ds);
  }
}

TEST_CASE("generation is deterministic") {
  CHECK(serialize_dataset(make_sample_dataset(7)) == serialize_dataset(make_sample_dataset(7)));
}

TEST_CASE("records are valid and bundled classes exclude 'other'") {
  const auto ds = make_sample_dataset();
  CHECK(ds.records.size() == 287);
  for (const auto& r : ds.records) {
    CHECK(validate_record(r).empty());
    CHECK(r.project_type != ProjectType::other);
  }
  for (const auto& named : bundled_classes()) CHECK(named.criteria.project_type.has_value());
}

TEST_CASE("rail and road cost classes separate") {
  const auto ds = make_sample_dataset();
  const auto rail = target_class(ds, kClassTargets[0]);
  const auto road = target_class(ds, kClassTargets[2]);
  CHECK(separation_test(rail.sample, road.sample).p_value < 0.05);
}
