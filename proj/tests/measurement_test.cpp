#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "evb/errors.hpp"
#include "evb/measurement.hpp"
#include "support.hpp"

using namespace evb;

namespace {

IngestResult ingest(const std::string& text, const std::string& id = "ds") {
  std::istringstream in(text);
  return ingest_csv(in, id);
}

MeasurementDataset table2_effort() {
  const auto result = ingest(test::fixture_text("table2_effort.csv"), "table2");
  REQUIRE(result.errors.empty());
  return result.dataset;
}

IndicatorDef distribution_by_phase(std::optional<std::vector<std::string>> order = std::nullopt) {
  return IndicatorDef{"dist", IndicatorKind::cumulative_distribution, "effort", "phase",
                      std::move(order)};
}

MeasurementRow row(std::string phase, std::int64_t hundredths, std::string role = "developer") {
  return MeasurementRow{*parse_iso_date("2001-07-23"), std::move(phase), std::move(role),
                        Decimal::from_hundredths(hundredths)};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no evb::Error thrown");
  return ErrorCode::io_error;
}

// Brute-force oracle: per-group totals in first-appearance order, computed
// in plain doubles without the library's grouping code.
struct OracleRow {
  std::string key;
  double value;
  double percent;
  double cumulative;
};

std::vector<OracleRow> oracle(const MeasurementDataset& ds) {
  std::vector<std::string> keys;
  for (const auto& r : ds.rows) {
    if (std::find(keys.begin(), keys.end(), r.phase) == keys.end()) keys.push_back(r.phase);
  }
  double total = 0;
  for (const auto& r : ds.rows) total += static_cast<double>(r.effort_hours.hundredths()) / 100.0;
  std::vector<OracleRow> out;
  double running = 0;
  for (const auto& key : keys) {
    double value = 0;
    for (const auto& r : ds.rows) {
      if (r.phase == key) value += static_cast<double>(r.effort_hours.hundredths()) / 100.0;
    }
    running += value;
    out.push_back({key, value, 100.0 * value / total, 100.0 * running / total});
  }
  return out;
}

MeasurementDataset random_dataset(std::mt19937_64& rng, int max_rows = 20) {
  static const std::vector<std::string> phases{"RP", "DP", "CP", "IP", "AP", "QA"};
  MeasurementDataset ds{"random", {}};
  const int n = std::uniform_int_distribution<int>(1, max_rows)(rng);
  for (int i = 0; i < n; ++i) {
    const auto& phase = phases[std::uniform_int_distribution<std::size_t>(0, phases.size() - 1)(rng)];
    // A few zero-hour rows on purpose.
    const std::int64_t h = rng() % 7 == 0 ? 0 : std::uniform_int_distribution<std::int64_t>(1, 99999)(rng);
    ds.rows.push_back(row(phase, h));
  }
  return ds;
}

std::int64_t total_hundredths(const MeasurementDataset& ds) {
  std::int64_t t = 0;
  for (const auto& r : ds.rows) t += r.effort_hours.hundredths();
  return t;
}

}  // namespace

TEST_CASE("decimal parsing and printing") {
  CHECK(Decimal::parse("7")->hundredths() == 700);
  CHECK(Decimal::parse("7.5")->hundredths() == 750);
  CHECK(Decimal::parse("0.25")->hundredths() == 25);
  CHECK(Decimal::parse("-1")->hundredths() == -100);
  CHECK_FALSE(Decimal::parse("1.234"));
  CHECK_FALSE(Decimal::parse("1."));
  CHECK_FALSE(Decimal::parse("1e3"));
  CHECK_FALSE(Decimal::parse(""));
  CHECK_FALSE(Decimal::parse("abc"));
  CHECK(Decimal::parse("350")->to_string() == "350");
  CHECK(Decimal::parse("7.50")->to_string() == "7.5");
  CHECK(Decimal::parse("0.05")->to_string() == "0.05");
  CHECK(format_fixed2(24.137931) == "24.14");
  CHECK(format_fixed2(100.0) == "100.00");
  CHECK(format_fixed2(0.125) == "0.13");
}

TEST_CASE("csv ingestion") {
  SUBCASE("valid rows") {
    const auto r = ingest("date,phase,role,effort_hours\r\n2001-07-23,RP,developer,7.5\r\n\r\n"
                          "2001-07-24, DP ,manager,0\n");
    CHECK(r.errors.empty());
    REQUIRE(r.dataset.rows.size() == 2);
    CHECK(r.dataset.rows[0].effort_hours == Decimal::from_hundredths(750));
    CHECK(r.dataset.rows[1].phase == "DP");
    CHECK(r.dataset.id == "ds");
  }
  SUBCASE("bad rows are reported with their line and skipped") {
    const auto r = ingest(
        "date,phase,role,effort_hours\n"
        "7-23-2001,RP,developer,1\n"
        "2001-07-23,RP,developer\n"
        "2001-07-23,,developer,1\n"
        "2001-07-23,RP,developer,1.234\n"
        "2001-07-23,RP,developer,-2\n"
        "2001-07-23,RP,developer,3\n");
    CHECK(r.dataset.rows.size() == 1);
    REQUIRE(r.errors.size() == 5);
    CHECK(r.errors[0].line == 2);
    CHECK(r.errors[0].message.find("malformed date") != std::string::npos);
    CHECK(r.errors[1].message == "expected 4 fields, found 3");
    CHECK(r.errors[2].message == "phase must not be empty");
    CHECK(r.errors[3].message.find("malformed effort_hours") != std::string::npos);
    CHECK(r.errors[4].message == "negative effort_hours -2");
    CHECK(r.errors[4].line == 6);
  }
  SUBCASE("header must match") {
    CHECK(code_of([] { ingest("date,phase,effort\n"); }) == ErrorCode::header_mismatch);
    CHECK(code_of([] { ingest(""); }) == ErrorCode::header_mismatch);
  }
  SUBCASE("canonical csv reads back unchanged") {
    const auto ds = table2_effort();
    CHECK(to_csv(ds) == test::fixture_text("table2_effort.csv"));
    CHECK(ingest(to_csv(ds), "table2").dataset == ds);
  }
}

TEST_CASE("table 2 effort distribution") {
  const auto ds = table2_effort();
  const auto result = compute_indicator(test::table2().indicator(), ds);

  // Hours per phase as printed, and a running-sum / total recomputation.
  const std::vector<std::pair<std::string, double>> printed{
      {"RP", 350}, {"DP", 350}, {"CP", 550}, {"IP", 150}, {"AP", 50}};
  const double total = 350 + 350 + 550 + 150 + 50;
  const std::vector<double> rounded{24.14, 48.28, 86.21, 96.55, 100.00};

  REQUIRE(result.rows.size() == printed.size());
  CHECK(result.total == total);
  CHECK(result.exact_total == Decimal::from_integer(1450));
  double running = 0;
  for (std::size_t i = 0; i < printed.size(); ++i) {
    CAPTURE(i);
    running += printed[i].second;
    CHECK(result.rows[i].key == printed[i].first);
    CHECK(result.rows[i].value == printed[i].second);
    CHECK(std::abs(result.rows[i].cumulative_percent - 100.0 * running / total) < 1e-9);
    CHECK(std::abs(result.rows[i].cumulative_percent - rounded[i]) <= 0.005);
    CHECK(format_fixed2(result.rows[i].cumulative_percent) == format_fixed2(rounded[i]));
  }
  CHECK(result.rows.back().cumulative_percent == 100.0);
}

TEST_CASE("distribution edge cases") {
  SUBCASE("single group") {
    const auto r = compute_indicator(distribution_by_phase(), {"d", {row("CP", 1000)}});
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].percent == 100.0);
    CHECK(r.rows[0].cumulative_percent == 100.0);
  }
  SUBCASE("two equal groups") {
    const auto r =
        compute_indicator(distribution_by_phase(), {"d", {row("A", 500), row("B", 500)}});
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].percent == 50.0);
    CHECK(r.rows[1].percent == 50.0);
    CHECK(r.rows[0].cumulative_percent == 50.0);
    CHECK(r.rows[1].cumulative_percent == 100.0);
  }
  SUBCASE("explicit order, unlisted keys follow sorted") {
    const auto r = compute_indicator(distribution_by_phase(std::vector<std::string>{"AP", "RP"}),
                                     table2_effort());
    std::vector<std::string> keys;
    for (const auto& x : r.rows) keys.push_back(x.key);
    CHECK(keys == std::vector<std::string>{"AP", "RP", "CP", "DP", "IP"});
    CHECK(r.rows.back().cumulative_percent == 100.0);
  }
  SUBCASE("no order means first appearance") {
    const auto r = compute_indicator(distribution_by_phase(),
                                     {"d", {row("X", 100), row("A", 100), row("X", 100)}});
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].key == "X");
    CHECK(r.rows[0].value == 2.0);
  }
  SUBCASE("grouping by role") {
    auto ind = distribution_by_phase();
    ind.group_by = "role";
    const auto r = compute_indicator(ind, table2_effort());
    std::map<std::string, double> by_role;
    for (const auto& x : r.rows) by_role[x.key] = x.value;
    CHECK(by_role == std::map<std::string, double>{{"developer", 1150}, {"manager", 200}, {"tester", 100}});
  }
  SUBCASE("errors") {
    CHECK(code_of([] { compute_indicator(distribution_by_phase(), {"d", {}}); }) ==
          ErrorCode::empty_dataset);
    CHECK(code_of([] { compute_indicator(distribution_by_phase(), {"d", {row("A", 0)}}); }) ==
          ErrorCode::empty_dataset);
    CHECK(code_of([] {
            compute_indicator(distribution_by_phase(std::vector<std::string>{"ZZ"}), table2_effort());
          }) == ErrorCode::unknown_order_key);
    // Empty data wins over a bad order key.
    CHECK(code_of([] {
            compute_indicator(distribution_by_phase(std::vector<std::string>{"ZZ"}), {"d", {}});
          }) == ErrorCode::empty_dataset);
    auto bad_metric = distribution_by_phase();
    bad_metric.value_metric = "cost";
    CHECK(code_of([&] { compute_indicator(bad_metric, table2_effort()); }) ==
          ErrorCode::unmapped_metric);
    auto bad_group = distribution_by_phase();
    bad_group.group_by = "team";
    CHECK(code_of([&] { compute_indicator(bad_group, table2_effort()); }) ==
          ErrorCode::unmapped_metric);
  }
}

TEST_CASE("scalar indicators") {
  const auto ds = table2_effort();
  IndicatorDef ind{"total", IndicatorKind::sum, "effort", std::nullopt, std::nullopt};
  auto r = compute_indicator(ind, ds);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].key == "total");
  CHECK(r.rows[0].value == 1450.0);
  CHECK(r.rows[0].exact == Decimal::from_integer(1450));

  ind.kind = IndicatorKind::mean;
  r = compute_indicator(ind, ds);
  CHECK(r.rows[0].value == doctest::Approx(1450.0 / 9));
  CHECK_FALSE(r.rows[0].exact);

  ind.kind = IndicatorKind::count;
  CHECK(compute_indicator(ind, ds).rows[0].value == 9.0);
  CHECK(compute_indicator(ind, {"e", {}}).rows[0].value == 0.0);

  ind.kind = IndicatorKind::mean;
  CHECK(code_of([&] { compute_indicator(ind, {"e", {}}); }) == ErrorCode::empty_dataset);
}

TEST_CASE("evaluate question") {
  const auto answer = evaluate_question(test::table2(), table2_effort());
  CHECK(answer.question == test::table2().question);
  CHECK(answer.result.rows.size() == 5);

  auto broken = test::table2();
  broken.question = "";
  CHECK(code_of([&] { evaluate_question(broken, table2_effort()); }) == ErrorCode::invalid_model);
}

TEST_CASE("distribution matches the brute-force oracle") {
  std::mt19937_64 rng(2001);
  for (int i = 0; i < 1000; ++i) {
    const auto ds = random_dataset(rng);
    if (total_hundredths(ds) == 0) {
      CHECK(code_of([&] { compute_indicator(distribution_by_phase(), ds); }) ==
            ErrorCode::empty_dataset);
      continue;
    }
    const auto r = compute_indicator(distribution_by_phase(), ds);
    const auto expected = oracle(ds);
    REQUIRE(r.rows.size() == expected.size());
    double percent_sum = 0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
      CHECK(r.rows[k].key == expected[k].key);
      CHECK(std::abs(r.rows[k].value - expected[k].value) < 1e-9);
      CHECK(std::abs(r.rows[k].percent - expected[k].percent) < 1e-9);
      CHECK(std::abs(r.rows[k].cumulative_percent - expected[k].cumulative) < 1e-9);
      if (k > 0) CHECK(r.rows[k].cumulative_percent >= r.rows[k - 1].cumulative_percent);
      percent_sum += r.rows[k].percent;
    }
    CHECK(std::abs(percent_sum - 100.0) < 1e-9);
    CHECK(r.rows.back().cumulative_percent == 100.0);
  }
}

TEST_CASE("distribution conserves the exact total") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const auto ds = random_dataset(rng);
    if (total_hundredths(ds) == 0) continue;
    const auto r = compute_indicator(distribution_by_phase(), ds);
    Decimal sum;
    for (const auto& x : r.rows) sum += *x.exact;
    CHECK(sum == Decimal::from_hundredths(total_hundredths(ds)));
    CHECK(r.exact_total == sum);
  }
}

TEST_CASE("row order does not change per-group results") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    auto ds = random_dataset(rng);
    if (total_hundredths(ds) == 0) continue;
    const auto before = compute_indicator(distribution_by_phase(), ds);
    std::shuffle(ds.rows.begin(), ds.rows.end(), rng);
    const auto after = compute_indicator(distribution_by_phase(), ds);
    std::map<std::string, std::pair<Decimal, double>> a, b;
    for (const auto& x : before.rows) a[x.key] = {*x.exact, x.percent};
    for (const auto& x : after.rows) b[x.key] = {*x.exact, x.percent};
    CHECK(a == b);
  }
}

TEST_CASE("percents are invariant under scaling") {
  // Hours carry two decimals, so k is drawn from the hundredths grid in
  // (0, 100] over integral base hours, keeping every scaled value exact.
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    auto ds = random_dataset(rng);
    for (auto& r : ds.rows) {
      r.effort_hours = Decimal::from_integer(r.effort_hours.hundredths() / 100);
    }
    if (total_hundredths(ds) == 0) continue;
    const std::int64_t k_hundredths = std::uniform_int_distribution<std::int64_t>(1, 10000)(rng);
    auto scaled = ds;
    for (auto& r : scaled.rows) {
      r.effort_hours = Decimal::from_hundredths(r.effort_hours.hundredths() / 100 * k_hundredths);
    }
    const auto base = compute_indicator(distribution_by_phase(), ds);
    const auto after = compute_indicator(distribution_by_phase(), scaled);
    REQUIRE(base.rows.size() == after.rows.size());
    for (std::size_t k = 0; k < base.rows.size(); ++k) {
      CHECK(std::abs(base.rows[k].percent - after.rows[k].percent) <= 1e-9);
      CHECK(std::abs(base.rows[k].cumulative_percent - after.rows[k].cumulative_percent) <= 1e-9);
    }
  }
}
