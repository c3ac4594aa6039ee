#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "refcast/engine.h"
#include "refcast/sample_data.h"

using namespace refcast;

namespace {

const Dataset& sample() {
  static const Dataset ds = make_sample_dataset();
  return ds;
}

ReferenceClass uk_rail() {
  ClassCriteria c;
  c.project_type = ProjectType::rail;
  c.regions = {"UK"};
  return build_reference_class(sample(), c);
}

ReferenceClass class_of(std::vector<double> xs) {
  ReferenceClass rc;
  rc.name = "synthetic";
  rc.sample = std::move(xs);
  for (std::size_t i = 0; i < rc.sample.size(); ++i) rc.members.push_back("m" + std::to_string(i));
  return rc;
}

}  // namespace

TEST_CASE("reference classes from the bundled dataset") {
  ClassCriteria rail;
  rail.project_type = ProjectType::rail;
  const auto rc = build_reference_class(sample(), rail);
  CHECK(rc.sample.size() == 58);
  CHECK(rc.members.size() == rc.sample.size());
  CHECK(rc.name == "rail/cost_inaccuracy");
  for (const auto& id : rc.members) CHECK(rail.matches(*sample().find(id)));

  ClassCriteria road_traffic;
  road_traffic.project_type = ProjectType::road;
  road_traffic.measure = Measure::traffic_inaccuracy;
  CHECK(build_reference_class(sample(), road_traffic).sample.size() == 183);

  ClassCriteria none;
  none.regions = {"Atlantis"};
  CHECK_THROWS_AS(build_reference_class(sample(), none), EmptyReferenceClass);

  ClassCriteria years;
  years.from_year = 1990;
  years.to_year = 1980;
  CHECK_THROWS(build_reference_class(sample(), years));
}

TEST_CASE("year filters are inclusive and members carry outcomes") {
  ClassCriteria c;
  c.from_year = 1960;
  c.to_year = 1970;
  const auto rc = build_reference_class(sample(), c);
  for (const auto& id : rc.members) {
    const auto* r = sample().find(id);
    CHECK(r->decision_year >= 1960);
    CHECK(r->decision_year <= 1970);
    CHECK(r->actual_cost.has_value());
  }
}

TEST_CASE("empirical distribution sorts a copy") {
  CHECK(std::ranges::equal(EmpiricalDistribution(std::vector<double>{30, 10, 20}).sorted_sample(),
                           std::vector<double>{10, 20, 30}));
  CHECK(EmpiricalDistribution(std::vector<double>{7}).n() == 1);
  CHECK_THROWS(EmpiricalDistribution(std::vector<double>{}));

  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> xs(1 + rep % 30);
    for (auto& v : xs) v = std::round(z(gen) * 4);
    const EmpiricalDistribution d(xs);
    CHECK(std::is_permutation(d.sorted_sample().begin(), d.sorted_sample().end(), xs.begin()));
    CHECK(std::ranges::is_sorted(d.sorted_sample()));
  }
}

TEST_CASE("quantile rule") {
  CHECK(quantile(EmpiricalDistribution(std::vector<double>{7}), 0.3) == 7.0);
  const EmpiricalDistribution d(std::vector<double>{10, 20, 30, 40});
  CHECK(quantile(d, 0.5) == 25.0);
  CHECK_THROWS(quantile(d, -0.1));
  CHECK_THROWS(quantile(d, 1.1));

  std::mt19937_64 gen(17);
  std::normal_distribution<double> z(40, 30);
  std::vector<double> xs(17);
  for (auto& v : xs) v = z(gen);
  const EmpiricalDistribution r(xs);
  for (double q : {0.1, 0.5, 0.9}) CHECK(quantile(r, q) == oracle::quantile(xs, q));
}

TEST_CASE("required uplift and curve") {
  const EmpiricalDistribution uk(uk_rail());
  CHECK(required_uplift(uk, 0.5) == 40.0);
  CHECK(required_uplift(uk, 0.1) == 68.0);
  CHECK_THROWS(required_uplift(uk, 0.0));
  CHECK_THROWS(required_uplift(uk, 1.01));

  const EmpiricalDistribution five(std::vector<double>{5, 5, 5});
  CHECK(required_uplift(five, 0.3) == 5.0);

  const std::vector<double> grid{0.1, 0.5};
  const auto curve = uplift_curve(uk, grid);
  REQUIRE(curve.points.size() == 2);
  CHECK(curve.points[0].uplift_pct == 68.0);
  CHECK(curve.points[1].uplift_pct == 40.0);

  CHECK_THROWS(uplift_curve(uk, std::vector<double>{0.5, 0.1}));
  CHECK_THROWS(uplift_curve(uk, std::vector<double>{0.0, 0.5}));
  CHECK_THROWS(uplift_curve(uk, std::vector<double>{}));
}

TEST_CASE("property: uplift curve non-increasing, quantiles bounded, exact extremes, scale equivariant") {
  std::mt19937_64 gen(23);
  std::lognormal_distribution<double> ln(3, 1);
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> xs(1 + rep % 60);
    for (auto& v : xs) v = ln(gen) - 40;
    const EmpiricalDistribution d(xs);
    const auto curve = uplift_curve(d, grid);
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      CHECK(curve.points[i].uplift_pct <= curve.points[i - 1].uplift_pct);

    const auto [lo, hi] = std::ranges::minmax(xs);
    CHECK(quantile(d, 0.0) == lo);
    CHECK(quantile(d, 1.0) == hi);
    for (double q = 0; q <= 1.0; q += 0.05) {
      CHECK(quantile(d, q) >= lo);
      CHECK(quantile(d, q) <= hi);
    }

    const double k = 0.5 + rep % 7;
    std::vector<double> scaled(xs);
    for (auto& v : scaled) v *= k;
    const EmpiricalDistribution ds(scaled);
    for (double q : {0.05, 0.33, 0.5, 0.9}) {
      CHECK(quantile(ds, q) == doctest::Approx(k * quantile(d, q)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("forecast adjustment arithmetic") {
  auto a = adjust_forecast(4000, 40, false);
  CHECK(a.uplift_amount == 1600.0);
  CHECK(a.adjusted_estimate == 5600.0);
  a = adjust_forecast(4000, 68, false);
  CHECK(a.uplift_amount == doctest::Approx(2720.0));
  CHECK(std::abs(a.uplift_amount - 2700.0) <= 20.0);
  CHECK(adjust_forecast(123.0, 0.0, false).adjusted_estimate == 123.0);

  const auto neg = adjust_forecast(100, -12, false);
  CHECK(neg.adjusted_estimate == doctest::Approx(88.0));
  CHECK_FALSE(neg.clamped);
  const auto clamped = adjust_forecast(100, -12, true);
  CHECK(clamped.uplift_pct == 0.0);
  CHECK(clamped.adjusted_estimate == 100.0);
  CHECK(clamped.clamped);
  CHECK_THROWS(adjust_forecast(0.0, 10, false));
}

TEST_CASE("delay adjustment") {
  const auto d = delay_adjustment(8000, 1);
  CHECK(d.extra_overrun_pct == doctest::Approx(4.64));
  CHECK(d.extra_cost == doctest::Approx(371.2));
  CHECK(d.extra_cost / 365.0 == doctest::Approx(1.017).epsilon(1e-3));
  const auto zero = delay_adjustment(8000, 0);
  CHECK(zero.extra_overrun_pct == 0.0);
  CHECK(zero.extra_cost == 0.0);
  CHECK_THROWS(delay_adjustment(8000, -1));
  CHECK_THROWS(delay_adjustment(0, 1));
}

TEST_CASE("reference forecast composition") {
  const auto uk = uk_rail();
  const auto r = reference_forecast(4000, uk, 0.5, 0, false);
  CHECK(r.adjusted_estimate == 5600.0);
  CHECK(r.class_name == uk.name);

  const auto delayed = reference_forecast(4000, uk, 0.5, 1, false);
  CHECK(delayed.uplift_pct == doctest::Approx(40.0 + 4.64));
  CHECK(delayed.adjusted_estimate == doctest::Approx(4000.0 * 1.4464));
  CHECK(delayed.adjusted_estimate == doctest::Approx(5785.6));

  const auto flat = reference_forecast(250, class_of({0, 0, 0}), 0.5, 0, false);
  CHECK(flat.adjusted_estimate == 250.0);
  CHECK_FALSE(flat.clamped);

  CHECK(reference_forecast(100, class_of({1, 2, 3}), 0.5, 0, false).warnings.size() == 1);
  CHECK(reference_forecast(100, class_of({1, 2, 3}), 0.5, 0, false, 3).warnings.empty());
  CHECK(r.warnings.empty());
}

TEST_CASE("property: forecast invariants") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> base(1, 1e5), pct(-90, 300), years(0, 20);
  std::normal_distribution<double> z(30, 40);
  std::vector<double> xs(25);
  for (auto& v : xs) v = z(gen);
  const auto rc = class_of(xs);
  for (int rep = 0; rep < 2000; ++rep) {
    const double b = base(gen), u = pct(gen);
    const auto a = adjust_forecast(b, u, false);
    CHECK(std::abs(a.adjusted_estimate / (1 + u / 100) - b) <= 1e-9 * b);
    CHECK(a.uplift_amount == doctest::Approx(a.adjusted_estimate - a.base_estimate).epsilon(1e-12));

    const double risk = 0.01 + 0.98 * (rep % 100) / 100.0;
    const auto f = reference_forecast(b, rc, risk, 0, false);
    const auto direct = adjust_forecast(b, required_uplift(EmpiricalDistribution(rc), risk), false);
    CHECK(f.adjusted_estimate == direct.adjusted_estimate);
    CHECK(f.uplift_pct == direct.uplift_pct);

    const double t1 = years(gen), t2 = years(gen);
    const auto d1 = delay_adjustment(b, t1), d2 = delay_adjustment(b, t2), d12 = delay_adjustment(b, t1 + t2);
    CHECK(d1.extra_overrun_pct + d2.extra_overrun_pct == doctest::Approx(d12.extra_overrun_pct).epsilon(1e-12));
    CHECK(d1.extra_cost + d2.extra_cost == doctest::Approx(d12.extra_cost).epsilon(1e-12));
  }
}

TEST_CASE("required uplift non-increasing in risk on every bundled class") {
  for (const auto& named : bundled_classes()) {
    const EmpiricalDistribution d(build_reference_class(sample(), named.criteria, named.name));
    double previous = 1e300;
    for (int i = 1; i <= 100; ++i) {
      const double u = required_uplift(d, i / 100.0);
      CHECK(u <= previous);
      previous = u;
    }
  }
}
