#include "cli_harness.h"
#include "doctest.h"
#include "refcast/report.h"

using namespace refcast;
using harness::run;

namespace {

const std::string kData = harness::source_path("data/reference_projects.csv");

}  // namespace

TEST_CASE("stats prints class statistics as JSON") {
  auto r = run({"stats", kData, "--type", "rail", "--measure", "cost"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  auto j = Json::parse(r.out);
  const auto& rail = j["classes"][0];
  CHECK(rail["n"] == 58);
  CHECK(rail["mean"].get<double>() == doctest::Approx(44.7));
  CHECK(rail["sd"].get<double>() == doctest::Approx(38.4));
  CHECK(rail["band"].get<double>() == 20.0);
  CHECK_FALSE(j.contains("pooled"));

  r = run({"stats", kData, "--type", "rail", "--measure", "traffic"});
  j = Json::parse(r.out);
  CHECK(j["classes"][0]["mean"].get<double>() == doctest::Approx(-51.4));
  CHECK(j["classes"][0]["share_outside_band"].get<double>() == doctest::Approx(0.84));
}

TEST_CASE("stats with several types adds pooled statistics and separation tests") {
  const auto r = run({"stats", kData, "--type", "rail", "--type", "road", "--bootstrap-reps", "300"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["classes"].size() == 2);
  CHECK(j["pooled"]["n"] == 58 + 167);
  REQUIRE(j["separation_tests"].size() == 1);
  CHECK(j["separation_tests"][0]["p_value"].get<double>() < 0.05);
  CHECK(j["classes"][0]["mean_ci"]["lower"].get<double>() < 44.7);
  CHECK(run({"stats", kData, "--type", "rail", "--type", "road", "--bootstrap-reps", "300"}).out == r.out);
}

TEST_CASE("stats errors") {
  auto r = run({"stats", "/nonexistent/file.csv"});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());

  CHECK(run({"stats", kData, "--type", "ship"}).code == 2);
  CHECK(run({"stats", kData, "--band", "0"}).code == 2);
  CHECK(run({"stats", kData, "--bogus"}).code == 2);
  CHECK(run({"stats"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"stats", kData, "--region", "Atlantis"}).code == 1);
}

TEST_CASE("uplift reports the adjusted forecast") {
  auto r = run({"uplift", kData, "--type", "rail", "--region", "UK", "--risk", "0.5", "--base", "4000"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["uplift_pct"].get<double>() == 40.0);
  CHECK(j["adjusted_estimate"].get<double>() == 5600.0);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"base_estimate", "class_name", "acceptable_risk", "uplift_pct",
                                         "uplift_amount", "adjusted_estimate", "clamped"});

  r = run({"uplift", kData, "--type", "rail", "--region", "UK", "--risk", "0.1", "--base", "4000"});
  CHECK(Json::parse(r.out)["uplift_amount"].get<double>() == doctest::Approx(2720.0));

  r = run({"uplift", kData, "--type", "road", "--risk", "1", "--base", "100", "--clamp"});
  j = Json::parse(r.out);
  CHECK(j["uplift_pct"].get<double>() == 0.0);
  CHECK(j["clamped"] == true);

  r = run({"uplift", kData, "--type", "rail", "--region", "UK", "--risk", "0.5", "--base", "4000",
           "--delay-years", "1"});
  CHECK(Json::parse(r.out)["adjusted_estimate"].get<double>() == doctest::Approx(5785.6));
}

TEST_CASE("uplift warnings go to stderr, never into the payload") {
  const auto r = run({"uplift", kData, "--type", "rail", "--region", "UK", "--risk", "0.5", "--base",
                      "4000", "--min-class-size", "30"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK_NOTHROW(Json::parse(r.out));
  CHECK(r.out.find("warning") == std::string::npos);
}

TEST_CASE("uplift errors") {
  CHECK(run({"uplift", kData, "--type", "rail", "--risk", "0", "--base", "1"}).code == 2);
  CHECK(run({"uplift", kData, "--type", "rail", "--risk", "1.5", "--base", "1"}).code == 2);
  CHECK(run({"uplift", kData, "--type", "rail", "--risk", "0.5", "--base", "-1"}).code == 2);
  CHECK(run({"uplift", kData, "--type", "rail", "--risk", "0.5"}).code == 2);
  CHECK(run({"uplift", kData, "--type", "rail", "--risk", "0.5", "--base", "1", "--delay-years", "-2"}).code == 2);
  const auto empty = run({"uplift", kData, "--type", "rail", "--region", "Mars", "--risk", "0.5", "--base", "1"});
  CHECK(empty.code == 1);
  CHECK(empty.out.empty());
}

TEST_CASE("curve CSV and SVG encode the same points") {
  auto r = run({"curve", kData, "--type", "rail", "--region", "UK", "--grid", "0.1,0.5"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "acceptable_risk,uplift_pct\n0.1,68\n0.5,40\n");

  for (const auto& type : {"rail", "road", "bridge_tunnel"}) {
    const auto csv = run({"curve", kData, "--type", type});
    const auto svg = run({"curve", kData, "--type", type, "--format", "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.rfind("<svg", 0) == 0);
    CHECK(harness::count(svg.out, "<polyline") == 1);

    const auto want = harness::parse_curve_csv(csv.out);
    const auto got = harness::decode_curve_svg(svg.out, SvgLayout::left, SvgLayout::plot_width,
                                               SvgLayout::top, SvgLayout::plot_height);
    REQUIRE(want.size() == 99);
    REQUIRE(got.size() == want.size());
    double lo = want.front().uplift, hi = lo;
    for (const auto& p : want) {
      lo = std::min(lo, p.uplift);
      hi = std::max(hi, p.uplift);
    }
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(std::abs(got[i].risk - want[i].risk) <= 0.005);
      CHECK(std::abs(got[i].uplift - want[i].uplift) <= 0.005 * std::max(hi - lo, 1.0));
    }
  }
}

TEST_CASE("curve grid ranges and validation") {
  auto r = run({"curve", kData, "--type", "rail", "--grid", "0.25:0.75:0.25"});
  REQUIRE(r.code == 0);
  CHECK(harness::parse_curve_csv(r.out).size() == 3);
  CHECK(run({"curve", kData, "--type", "rail", "--grid", "0.5,0.1"}).code == 2);
  CHECK(run({"curve", kData, "--type", "rail", "--grid", "0,0.5"}).code == 2);
  CHECK(run({"curve", kData, "--type", "rail", "--grid", "abc"}).code == 2);
  CHECK(run({"curve", kData, "--type", "rail", "--format", "png"}).code == 2);
  CHECK(run({"curve", kData, "--type", "rail", "--histogram"}).code == 2);
}

TEST_CASE("histogram draws one mean marker per region") {
  auto r = run({"curve", kData, "--type", "rail", "--region", "UK", "--format", "svg", "--histogram"});
  REQUIRE(r.code == 0);
  CHECK(harness::count(r.out, "class=\"mean-marker\"") == 1);
  r = run({"curve", kData, "--type", "rail", "--format", "svg", "--histogram", "--bin-width", "5"});
  CHECK(harness::count(r.out, "class=\"mean-marker\"") == 2);
  CHECK(harness::count(r.out, "class=\"bar\"") > 0);
}

TEST_CASE("simulate") {
  const auto demo = harness::source_path("configs/rail_bias_demo.conf");
  const auto a = run({"simulate", demo});
  REQUIRE(a.code == 0);
  CHECK(a.out == run({"simulate", demo}).out);
  CHECK(a.out == run({"simulate", demo, "--serial"}).out);
  CHECK(Json::parse(a.out) == Json::parse(harness::read_file(harness::source_path("tests/golden/rail_bias_demo.json"))));
  CHECK(Json::parse(a.out)["mean_regret"].get<double>() > 0.0);

  const auto zero = run({"simulate", harness::source_path("configs/zero_bias.conf")});
  CHECK(Json::parse(zero.out)["mean_regret"].get<double>() == 0.0);

  CHECK(run({"simulate", "/nonexistent.conf"}).code == 1);
  const auto dir = harness::scratch_dir("cli_conf");
  std::ofstream(dir / "bad.conf") << "trials = 0\n";
  CHECK(run({"simulate", (dir / "bad.conf").string()}).code == 2);
  std::ofstream(dir / "unknown.conf") << "colour = blue\n";
  CHECK(run({"simulate", (dir / "unknown.conf").string()}).code == 2);
}

TEST_CASE("make-sample-data") {
  const auto dir = harness::scratch_dir("cli_sample");
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string(), c = (dir / "c.csv").string();
  REQUIRE(run({"make-sample-data", "--out", a}).code == 0);
  REQUIRE(run({"make-sample-data", "--out", b}).code == 0);
  REQUIRE(run({"make-sample-data", "--seed", "5", "--out", c}).code == 0);
  CHECK(harness::read_file(a) == harness::read_file(b));
  CHECK(harness::read_file(a) != harness::read_file(c));
  CHECK(harness::read_file(a) == harness::read_file(kData));
  CHECK(run({"make-sample-data"}).out == harness::read_file(a));
  CHECK(run({"make-sample-data", "--out", "/nonexistent/dir/x.csv"}).code == 1);
}

TEST_CASE("JSON payloads round-trip without field loss") {
  const auto up = run({"uplift", kData, "--type", "rail", "--risk", "0.2", "--base", "900"});
  const auto parsed = Json::parse(up.out);
  CHECK(to_json(forecast_report_from_json(parsed)) == parsed);
  const auto sim = Json::parse(run({"simulate", harness::source_path("configs/zero_bias.conf")}).out);
  CHECK(to_json(sim_result_from_json(sim)) == sim);
  CHECK(Json::parse(parsed.dump()) == parsed);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("stats") != std::string::npos);
}
