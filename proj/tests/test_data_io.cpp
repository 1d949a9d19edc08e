#include <doctest.h>

#include <string>
#include <vector>

#include "epibatch/data_io.hpp"
#include "epibatch/fixtures.hpp"

using namespace epibatch;

TEST_CASE("series CSV parses the documented header and round-trips") {
  const std::string csv =
      "date,confirmed,new_confirmed,disappeared,new_disappeared,active\n"
      "2020-11-06,559161,3241,457569,721,101592\n"
      "2020-11-07,562577,3416,458342,773,104235\n";
  const auto series = parse_series_text(csv);
  CHECK(series.size() == 2);
  CHECK(series.day(1).active == 101592);
  CHECK(series.day(2).new_confirmed == 3416);
  CHECK(series_to_csv(series) == csv);
}

TEST_CASE("round-trip is lossless for every fixture") {
  for (const auto& fx : all_fixtures()) {
    const auto parsed = parse_series_text(series_to_csv(fx.series));
    REQUIRE(parsed.size() == fx.series.size());
    for (std::size_t i = 1; i <= parsed.size(); ++i) {
      const auto day = static_cast<int>(i);
      CHECK(parsed.day(day).date == fx.series.day(day).date);
      CHECK(parsed.day(day).confirmed == fx.series.day(day).confirmed);
      CHECK(parsed.day(day).active == fx.series.day(day).active);
    }
  }
}

TEST_CASE("tampered active column is rejected with the row and identity") {
  const std::string csv =
      "date,confirmed,new_confirmed,disappeared,new_disappeared,active\n"
      "2020-11-06,559161,3241,457569,721,101593\n";
  CHECK_THROWS_WITH_AS(
      parse_series_text(csv),
      doctest::Contains("active != confirmed - disappeared at row 1"),
      ValidationError);
  // Lax mode records the violation instead.
  const auto lax = parse_series_text(csv, /*lax=*/true);
  REQUIRE(lax.warnings().size() == 1);
  CHECK(lax.warnings()[0].find("row 1") != std::string::npos);
}

TEST_CASE("header and cell errors are reported") {
  CHECK_THROWS_WITH_AS(parse_series_text("date,confirmed\n"),
                       doctest::Contains("header mismatch"), ValidationError);
  const std::string bad_cell =
      "date,confirmed,new_confirmed,disappeared,new_disappeared,active\n"
      "2020-11-06,559161,x,457569,721,101592\n";
  CHECK_THROWS_WITH_AS(parse_series_text(bad_cell),
                       doctest::Contains("not an integer"), ValidationError);
  CHECK_THROWS_AS(parse_series_text(""), ValidationError);
}

TEST_CASE("broken day sequencing is caught") {
  const std::string csv =
      "date,confirmed,new_confirmed,disappeared,new_disappeared,active\n"
      "2020-11-06,100,0,40,0,60\n"
      "2020-11-08,110,10,40,0,70\n";
  CHECK_THROWS_WITH_AS(parse_series_text(csv),
                       doctest::Contains("one day"), ValidationError);
}

TEST_CASE("from_cumulative derives dailies and flags regressions") {
  const std::vector<std::int64_t> confirmed{10, 15};
  const std::vector<std::int64_t> deaths{1, 2};
  const std::vector<std::int64_t> recovered{2, 3};
  const std::vector<std::string> dates{"2020-11-01", "2020-11-02"};
  const auto series = from_cumulative(confirmed, deaths, recovered, dates);
  CHECK(series.day(1).active == 7);
  CHECK(series.day(2).active == 10);
  CHECK(series.day(1).new_confirmed == 0);
  CHECK(series.day(2).new_confirmed == 5);
  CHECK(series.day(2).new_disappeared == 2);

  const std::vector<std::int64_t> decreasing{10, 9};
  CHECK_THROWS_WITH_AS(from_cumulative(decreasing, deaths, recovered, dates),
                       doctest::Contains("non-monotone"), ValidationError);
  const std::vector<std::int64_t> short_conf{10};
  CHECK_THROWS_AS(from_cumulative(short_conf, deaths, recovered, dates),
                  ValidationError);
}

TEST_CASE("egypt reconstructs from its implied cumulative columns") {
  const auto& egypt = fixture("egypt");
  // Prepend the implied day before the table so first differences reproduce
  // the table's day-1 daily values as well.
  std::vector<std::int64_t> confirmed{egypt.series.day(1).confirmed -
                                      egypt.series.day(1).new_confirmed};
  std::vector<std::int64_t> recovered{egypt.series.day(1).disappeared -
                                      egypt.series.day(1).new_disappeared};
  std::vector<std::int64_t> deaths{0};
  std::vector<std::string> dates{"2020-10-31"};
  for (std::size_t i = 1; i <= egypt.series.size(); ++i) {
    const auto& row = egypt.series.day(static_cast<int>(i));
    confirmed.push_back(row.confirmed);
    recovered.push_back(row.disappeared);
    deaths.push_back(0);
    dates.push_back(row.date);
  }
  const auto rebuilt = from_cumulative(confirmed, deaths, recovered, dates);
  REQUIRE(rebuilt.size() == egypt.series.size() + 1);
  for (std::size_t i = 1; i <= egypt.series.size(); ++i) {
    const auto& want = egypt.series.day(static_cast<int>(i));
    const auto& got = rebuilt.day(static_cast<int>(i) + 1);
    CHECK(got.new_confirmed == want.new_confirmed);
    CHECK(got.new_disappeared == want.new_disappeared);
    CHECK(got.active == want.active);
  }
}

TEST_CASE("all six fixtures validate and carry the published initials") {
  REQUIRE(all_fixtures().size() == 6);
  const std::vector<std::pair<std::string, std::int64_t>> expected{
      {"new-york", 101592}, {"india", 561908},       {"egypt", 1903},
      {"south-korea", 1825}, {"italy", 613358},      {"mexico", 158429}};
  for (const auto& [key, k] : expected) {
    const auto& fx = fixture(key);
    CHECK(fx.series.day(1).active == k);
    CHECK(fx.initial_active == k);
    CHECK(fx.series.size() == 20);
    CHECK(fx.series.warnings().empty());
  }
  CHECK_THROWS_AS(fixture("atlantis"), ValidationError);
}

TEST_CASE("svg charts are deterministic and carry one polyline per series") {
  std::vector<ChartSeries> chart;
  chart.push_back({"observed", {1, 2, 3, 4}, {10.0, 12.0, 15.0, 19.0}});
  chart.push_back({"model", {1, 2, 3, 4}, {10.0, 12.5, 14.8, 19.5}});
  const auto svg = render_line_chart("demo", "day", "active cases", chart);
  const auto again = render_line_chart("demo", "day", "active cases", chart);
  CHECK(svg == again);

  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    pos += 9;
  }
  CHECK(polylines == 2);
  CHECK(svg.find(">day<") != std::string::npos);
  CHECK(svg.find(">active cases<") != std::string::npos);
  CHECK(svg.find("<svg") == 0);

  CHECK_THROWS_AS(render_line_chart("x", "x", "y", {}), ValidationError);
  std::vector<ChartSeries> ragged;
  ragged.push_back({"bad", {1, 2}, {1.0}});
  CHECK_THROWS_AS(render_line_chart("x", "x", "y", ragged), ValidationError);
}

TEST_CASE("csv writers keep their documented headers") {
  ExpectedTrajectory traj;
  traj.times = {0, 1};
  traj.values = {10, 12};
  traj.per_group = {{6, 7}, {4, 5}};
  traj.mass_defect = {0, 0};
  const auto csv = trajectory_to_csv(traj);
  CHECK(csv.rfind("t,total,group_0,group_1,mass_defect\n", 0) == 0);

  EnsembleSummary summary;
  summary.mean = {10};
  summary.variance = {0.5};
  summary.p05 = {9};
  summary.p95 = {11};
  CHECK(ensemble_to_csv(summary).rfind("day,mean,var,p05,p95\n", 0) == 0);

  ReplicationTrace trace;
  trace.day_counts = {{3, 4}, {5, 6}};
  CHECK(trace_to_csv(trace).rfind("day,group_0,group_1\n", 0) == 0);

  RhoCurve curve;
  curve.times = {0};
  curve.values = {1.0};
  CHECK(rho_to_csv(curve).rfind("day,rho\n", 0) == 0);
}
