#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"
#include "vcsim/checks.hpp"
#include "vcsim/metrics.hpp"

using namespace vcsim;
using namespace vcsim::metrics;

namespace {

std::string synthetic_log(int orders, int closed, int cycle) {
  std::string log = "NOTE 0 setup retailer R\n";
  for (int i = 1; i <= orders; ++i) {
    log += "MSG " + std::to_string(i) + " " + std::to_string(i) + " C1 R CustomerOrder O" + std::to_string(i) +
           " C1 A 1\n";
  }
  for (int i = 1; i <= orders; ++i) {
    const bool ok = i <= closed;
    log += "NOTE " + std::to_string(i + (ok ? cycle : 1)) + " order O" + std::to_string(i) +
           (ok ? " Closed\n" : " Rejected\n");
  }
  return log + "END " + std::to_string(orders + cycle) + " " + std::to_string(orders) + "\n";
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(VCSIM_SCENARIO_DIR)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void check_against_recount(const std::string& log) {
  const Metrics m = compute_metrics(log);
  const auto naive = testing::naive_recount(log);
  REQUIRE(naive.has_end);
  CHECK(static_cast<std::int64_t>(m.orders_total) == naive.total);
  CHECK(static_cast<std::int64_t>(m.orders_closed) == naive.closed);
  CHECK(static_cast<std::int64_t>(m.orders_rejected) == naive.rejected);
  CHECK(static_cast<std::int64_t>(m.replenishments) == naive.distinct_pos);
  CHECK(static_cast<std::int64_t>(m.declines) == naive.declines);
  if (naive.total > 0) {
    CHECK(m.fill_rate.num() * naive.total == naive.closed * m.fill_rate.den());
  } else {
    CHECK(m.fill_rate == Rational(1, 1));
  }
  CHECK(m.cycle_time_defined == (naive.closed > 0));
  if (naive.closed > 0) CHECK(m.mean_cycle_time.num() * naive.closed == naive.cycle_sum * m.mean_cycle_time.den());
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("eight of ten closed is four fifths") {
  const Metrics m = compute_metrics(synthetic_log(10, 8, 3));
  CHECK(m.orders_total == 10);
  CHECK(m.orders_closed == 8);
  CHECK(m.orders_rejected == 2);
  CHECK(m.fill_rate == Rational(4, 5));
  CHECK(m.fill_rate.fraction() == "4/5");
  CHECK(m.fill_rate.decimal6() == "0.800000");
  CHECK(m.mean_cycle_time == Rational(3, 1));
}

TEST_CASE("no orders: fill rate one, cycle time undefined") {
  const Metrics m = compute_metrics("NOTE 0 setup retailer R\nEND 0 0\n");
  CHECK(m.orders_total == 0);
  CHECK(m.fill_rate == Rational(1, 1));
  CHECK_FALSE(m.cycle_time_defined);
}

TEST_CASE("truncated and malformed logs") {
  const std::string full = synthetic_log(3, 3, 2);
  const std::string cut = full.substr(0, full.rfind("END"));
  try {
    compute_metrics(cut);
    FAIL("expected TruncatedLog");
  } catch (const MetricsError& e) {
    CHECK(e.code() == MetricsErrc::TruncatedLog);
  }
  CHECK_THROWS_AS(compute_metrics(full + "NOTE 9 late\n"), MetricsError);
  CHECK_THROWS_AS(compute_metrics("BOGUS 1\nEND 1 0\n"), MetricsError);
  CHECK_THROWS_AS(compute_metrics("NOTE 4 order O9 Closed\nEND 4 0\n"), MetricsError);
}

TEST_CASE("json output carries fractions and decimals") {
  const std::string text = to_json(compute_metrics(synthetic_log(3, 2, 1)));
  CHECK(text.find("\"fill_rate\": \"2/3\"") != std::string::npos);
  CHECK(text.find("\"fill_rate_decimal\": \"0.666667\"") != std::string::npos);
}

TEST_CASE("corpus logs agree with the naive recount") {
  for (const auto& file : corpus()) {
    CAPTURE(file.string());
    const auto run = scenario::run_scenario(scenario::load_scenario(file));
    check_against_recount(run.rendered);
  }
}

TEST_CASE("fuzzed logs agree with the naive recount") {
  testing::FuzzLimits limits;
  limits.max_orders = 40;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    CAPTURE(seed);
    check_against_recount(scenario::run_scenario(testing::fuzz_scenario(seed, limits)).rendered);
  }
}

}

TEST_SUITE("checks") {

TEST_CASE("corpus scenarios pass every invariant") {
  for (const auto& file : corpus()) {
    CAPTURE(file.string());
    const auto s = scenario::load_scenario(file);
    const auto run = scenario::run_scenario(s);
    const auto report = checks::check_run(s, *run.world);
    for (const auto& v : report.violations) MESSAGE(v.invariant << ": " << v.detail);
    CHECK(report.ok());
  }
}

TEST_CASE("fuzzed scenarios pass every invariant") {
  testing::FuzzLimits limits;
  limits.max_orders = 60;
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    CAPTURE(seed);
    const auto s = testing::fuzz_scenario(seed, limits);
    const auto run = scenario::run_scenario(s);
    const auto report = checks::check_run(s, *run.world);
    for (const auto& v : report.violations) MESSAGE(v.invariant << ": " << v.detail);
    CHECK(report.ok());
    CHECK(checks::conservation_totals(*run.world).balanced());
  }
}

TEST_CASE("an unfinished run is flagged") {
  const auto s = testing::fuzz_scenario(7);
  scenario::World world(s);
  for (int i = 0; i < 5; ++i) world.simulation().step();
  const auto report = checks::check_run(s, world);
  CHECK(report.has("quiescence"));
  CHECK(report.has("order-terminal"));
}

TEST_CASE("an undeclared order is flagged") {
  const auto s = testing::fuzz_scenario(8);
  scenario::World world(s);
  world.simulation().send(s.customers.front(), s.retailer,
                          protocol::CustomerOrder{protocol::OrderId("Extra"), s.customers.front(),
                                                  s.catalog.begin()->first, 1},
                          SimTime{0});
  world.run();
  CHECK(checks::check_run(s, world).has("order-terminal"));
}

TEST_CASE("event bound grows with warehouses and replenishments") {
  CHECK(checks::order_event_bound(1, 0, false) == 7);
  CHECK(checks::order_event_bound(3, 0, false) == 13);
  CHECK(checks::order_event_bound(3, 2, false) == 21);
  CHECK(checks::order_event_bound(3, 2, true) == 25);
}

}
