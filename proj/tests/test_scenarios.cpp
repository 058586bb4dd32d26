#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "ctmn/error.hpp"
#include "ctmn/scenarios.hpp"
#include "oracles.hpp"

using namespace ctmn;

TEST_CASE("scenario state spaces") {
  const std::map<ScenarioId, std::set<std::string>> expected{
      {ScenarioId::vehicular_pos1, {"-", "A", "B", "D", "BD"}},
      {ScenarioId::vehicular_pos2, {"-", "A", "B", "D"}},
      {ScenarioId::plc_chain, {"-", "A", "B", "C", "D", "E", "AD", "AE", "BE"}},
      {ScenarioId::wlan_bonding, {"-", "A", "B", "C", "D", "E", "AB", "AC", "BC", "BD", "CD", "ABC", "BCD"}}};
  for (const auto& [id, states] : expected) {
    const auto s = build(id);
    CHECK(oracle::labels(enumerate(s.graph).states(), s.nodes()) == states);
  }
}

TEST_CASE("scenario defaults") {
  const auto v = build(ScenarioId::vehicular_pos1);
  CHECK(v.nodes().front().tx_time_mean == 3e-3);
  CHECK(v.nodes().front().packet_len_mean == 8000.0);
  const auto p = build(ScenarioId::plc_chain);
  CHECK(p.nodes().front().tx_time_mean == 1359.02e-6);
  CHECK(p.nodes().front().packet_len_mean == 12000.0);
  const auto w = build(ScenarioId::wlan_bonding);
  CHECK(w.nodes().front().tx_time_mean == 0.1e-3);
  CHECK(w.nodes().front().backoff_mean == 50e-6);
  std::vector<int> widths;
  for (const auto& n : w.nodes()) widths.push_back(n.width());
  CHECK(widths == std::vector<int>{1, 1, 2, 4, 8});
}

TEST_CASE("PLC two-hop rule matches the explicit pair list") {
  const auto rule = build(ScenarioId::plc_chain);
  const auto pairs = build_from_pairs(
      rule.nodes(), {{"A", "B"}, {"A", "C"}, {"B", "C"}, {"B", "D"}, {"C", "D"}, {"C", "E"}, {"D", "E"}});
  CHECK(rule.graph.edges() == pairs.edges());
}

TEST_CASE("overrides") {
  ScenarioOverrides o;
  o.uniform.tx_time_mean = 2e-3;
  o.per_node["B"].backoff_mean = 7e-3;
  const auto s = build(ScenarioId::vehicular_pos1, o);
  CHECK(s.nodes()[0].tx_time_mean == 2e-3);
  CHECK(s.nodes()[1].backoff_mean == 7e-3);
  CHECK(s.nodes()[0].backoff_mean == 3e-3);

  ScenarioOverrides bad;
  bad.uniform.backoff_mean = -1.0;
  CHECK_THROWS_AS(build(ScenarioId::plc_chain, bad), InputError);
  ScenarioOverrides unknown;
  unknown.per_node["Z"].backoff_mean = 1.0;
  CHECK_THROWS_AS(build(ScenarioId::plc_chain, unknown), InputError);
  CHECK_THROWS_AS(parse_scenario_id("manhattan"), InputError);
  CHECK(parse_scenario_id("plc_chain") == ScenarioId::plc_chain);
}

TEST_CASE("uniform overrides preserve scenario symmetry") {
  ScenarioOverrides o;
  o.uniform = {2.2e-3, 1.1e-3, 9000.0};
  const auto v = analyze(build(ScenarioId::vehicular_pos1, o).graph).report;
  CHECK(v.throughput(1) == doctest::Approx(v.throughput(2)).epsilon(1e-14));
  const auto p = analyze(build(ScenarioId::plc_chain, o).graph).report;
  CHECK(p.throughput(0) == doctest::Approx(p.throughput(4)).epsilon(1e-14));
  CHECK(p.throughput(1) == doctest::Approx(p.throughput(3)).epsilon(1e-14));
}

TEST_CASE("default grid") {
  const auto s = build(ScenarioId::plc_chain);
  const auto grid = default_backoff_grid(s);
  REQUIRE(grid.size() == 50);
  CHECK(grid.front() == doctest::Approx(1359.02e-6 / 100));
  CHECK(grid.back() == doctest::Approx(1359.02e-6 * 10));
  for (std::size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] > grid[k - 1]);
}

TEST_CASE("sweep_backoff") {
  SUBCASE("empty grid") { CHECK_THROWS_AS(sweep_backoff(ScenarioId::plc_chain, {}), InputError); }
  SUBCASE("non-positive grid value") { CHECK_THROWS_AS(sweep_backoff(ScenarioId::plc_chain, {1e-3, 0.0}), InputError); }

  SUBCASE("vehicular pos1: x_A/x_B rises toward 1, starvation at small E[B]") {
    const auto s = build(ScenarioId::vehicular_pos1);
    const double et = s.nodes().front().tx_time_mean;
    const auto rows = sweep_backoff(ScenarioId::vehicular_pos1, log_grid(et / 1e4, et * 1e4, 40));
    double previous = 0.0;
    for (const auto& row : rows) {
      const double ratio = row.report.throughput(0) / row.report.throughput(1);
      CHECK(ratio > previous);
      previous = ratio;
    }
    CHECK(rows.front().report.throughput(0) / rows.front().report.throughput(1) < 1e-3);
    CHECK(previous > 0.999);
  }

  SUBCASE("PLC ordering x_A = x_E >= x_B = x_D >= x_C") {
    const auto s = build(ScenarioId::plc_chain);
    for (const auto& row : sweep_backoff(ScenarioId::plc_chain, default_backoff_grid(s))) {
      const auto& x = row.report.throughput;
      CHECK(x(0) == doctest::Approx(x(4)).epsilon(1e-13));
      CHECK(x(1) == doctest::Approx(x(3)).epsilon(1e-13));
      CHECK(x(0) >= x(1));
      CHECK(x(1) >= x(2));
    }
  }

  SUBCASE("PLC: larger E[B] reduces the bottleneck's unfairness") {
    const auto s = build(ScenarioId::plc_chain);
    const double et = s.nodes().front().tx_time_mean;
    const auto rows = sweep_backoff(ScenarioId::plc_chain, default_backoff_grid(s), {}, 3);
    double previous_ratio = 0.0, previous_xc = 0.0;
    for (const auto& row : rows) {
      const auto& x = row.report.throughput;
      CHECK(x(2) / x(0) > previous_ratio);
      previous_ratio = x(2) / x(0);
      // x_C alone rises only while theta >= 1/sqrt(3)
      if (et / row.backoff_mean >= 1.0 / std::sqrt(3.0)) {
        CHECK(x(2) > previous_xc);
        previous_xc = x(2);
      }
    }
  }

  SUBCASE("single point equals the direct analysis") {
    const auto rows = sweep_backoff(ScenarioId::wlan_bonding, {50e-6});
    CHECK(rows.front().report.throughput == analyze(build(ScenarioId::wlan_bonding).graph).report.throughput);
  }
}
