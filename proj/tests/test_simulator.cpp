#include <doctest.h>

#include <cmath>

#include "ctmn/error.hpp"
#include "ctmn/scenarios.hpp"
#include "ctmn/simulator.hpp"
#include "oracles.hpp"

using namespace ctmn;

namespace {

SimConfig quick(const ConflictGraph& g, int reps = 10) {
  SimConfig c = default_sim_config(g.nodes());
  c.replications = reps;
  c.seed = 42;
  return c;
}

bool within_ci(double estimate, double half_width, double truth) {
  return std::abs(estimate - truth) <= half_width;
}

}  // namespace

TEST_CASE("distribution samples have the requested mean") {
  std::mt19937_64 rng(5);
  for (auto kind : {DistributionKind::exponential, DistributionKind::deterministic, DistributionKind::uniform}) {
    const DistributionSpec d{kind, 2.5};
    double sum = 0.0, residual_sum = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
      const double x = d.sample(rng);
      CHECK(x >= 0.0);
      sum += x;
      residual_sum += d.sample_residual(rng);
    }
    CHECK(sum / n == doctest::Approx(2.5).epsilon(0.01));
    // stationary excess mean is E[X^2] / (2 E[X]): 2.5, 1.25, 5/3 for exp/det/uniform
    const double excess = kind == DistributionKind::exponential ? 2.5
                          : kind == DistributionKind::deterministic ? 1.25
                                                                    : 2.5 * 4.0 / 6.0;
    CHECK(residual_sum / n == doctest::Approx(excess).epsilon(0.01));
  }
  CHECK(parse_distribution_kind("det") == DistributionKind::deterministic);
  CHECK_THROWS_AS(parse_distribution_kind("pareto"), InputError);
}

TEST_CASE("t critical values") {
  CHECK(t_critical_95(9) == doctest::Approx(2.262157));
  CHECK(t_critical_95(100) == doctest::Approx(1.983972).epsilon(1e-6));
  CHECK_THROWS(t_critical_95(0));
}

TEST_CASE("single node with theta = 3 spends 3/4 of the time transmitting") {
  const ConflictGraph g({oracle::node("A", 1e-3, 3e-3)}, {});
  const auto r = simulate(g, quick(g));
  CHECK(within_ci(r.airtime(0), r.airtime_ci95(0), 0.75));
  CHECK(r.airtime(0) == doctest::Approx(0.75).epsilon(0.01));
  CHECK(r.pi_hat(0) + r.pi_hat(1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two conflicting nodes with theta = 1 split time in thirds") {
  const ConflictGraph g({oracle::node("A"), oracle::node("B")}, {{0, 1}});
  const auto r = simulate(g, quick(g));
  for (Eigen::Index k = 0; k < 3; ++k) CHECK(r.pi_hat(k) == doctest::Approx(1.0 / 3.0).epsilon(0.02));
  CHECK(within_ci(r.airtime(0), r.airtime_ci95(0), 1.0 / 3.0));
  CHECK(within_ci(r.airtime(1), r.airtime_ci95(1), 1.0 / 3.0));
}

TEST_CASE("PLC chain with E[B] = E[T] converges to the product form") {
  const auto s = build(ScenarioId::plc_chain);
  const auto a = analyze(s.graph);
  const auto r = simulate(s.graph, a.space, quick(s.graph));
  for (Eigen::Index k = 0; k < r.pi_hat.size(); ++k) {
    CHECK(r.pi_hat(k) == doctest::Approx(a.dist.pi(k)).epsilon(0.02));
  }
  for (const auto& rep : r.replications) {
    CHECK(rep.partition_error < 1e-9);
    CHECK(rep.state_fraction.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.events > 0);
  }
}

TEST_CASE("bonded nodes transmit for E[T]/c") {
  const auto s = build(ScenarioId::wlan_bonding);
  const auto a = analyze(s.graph);
  SimConfig c = quick(s.graph, 4);
  c.measure /= 10;
  const auto r = simulate(s.graph, a.space, c);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(r.airtime(i) == doctest::Approx(a.report.airtime(i)).epsilon(0.02));
  CHECK(r.throughput(2) / 1e6 == doctest::Approx(2016.0 / 17).epsilon(0.02));
}

TEST_CASE("reproducible for a fixed seed, independent of job count") {
  const auto s = build(ScenarioId::vehicular_pos1);
  SimConfig c = quick(s.graph, 6);
  c.measure /= 20;
  const auto a = simulate(s.graph, c);
  c.jobs = 4;
  const auto b = simulate(s.graph, c);
  CHECK(a.pi_hat == b.pi_hat);
  CHECK(a.airtime == b.airtime);
  CHECK(a.airtime_ci95 == b.airtime_ci95);
  c.seed += 1;
  CHECK(simulate(s.graph, c).pi_hat != a.pi_hat);
}

TEST_CASE("invalid configurations") {
  const auto s = build(ScenarioId::vehicular_pos2);
  SimConfig c = quick(s.graph);
  c.measure = 0.0;
  CHECK_THROWS_AS(simulate(s.graph, c), InputError);
  c = quick(s.graph);
  c.warmup = -1.0;
  CHECK_THROWS_AS(simulate(s.graph, c), InputError);
  c = quick(s.graph);
  c.replications = 0;
  CHECK_THROWS_AS(simulate(s.graph, c), InputError);
}

TEST_CASE("a single replication reports an unbounded interval") {
  const ConflictGraph g({oracle::node("A")}, {});
  SimConfig c = quick(g, 1);
  c.measure /= 10;
  const auto r = simulate(g, c);
  CHECK(std::isinf(r.airtime_ci95(0)));
}

TEST_CASE("insensitivity: single node, every distribution pair") {
  const ConflictGraph g({oracle::node("A", 1e-3, 3e-3)}, {});
  const auto rep = insensitivity_check(g, quick(g));
  REQUIRE(rep.runs.size() == 9);
  for (const auto& run : rep.runs) CHECK(std::abs(run.result.airtime(0) - 0.75) <= run.result.airtime_ci95(0) + 1e-9);
  CHECK(rep.all_pass());
}

TEST_CASE("insensitivity: deterministic backoff or transmission on the PLC chain") {
  const auto s = build(ScenarioId::plc_chain);
  const auto a = analyze(s.graph);
  for (auto [b, t] : {std::pair{DistributionKind::deterministic, DistributionKind::exponential},
                      std::pair{DistributionKind::exponential, DistributionKind::deterministic},
                      std::pair{DistributionKind::deterministic, DistributionKind::uniform}}) {
    SimConfig c = quick(s.graph);
    c.backoff = b;
    c.tx_time = t;
    const auto r = simulate(s.graph, a.space, c);
    for (Eigen::Index i = 0; i < 5; ++i) {
      CHECK(std::abs(r.airtime(i) - a.report.airtime(i)) / a.report.airtime(i) < 0.02);
    }
  }
}

TEST_CASE("insensitivity: fully deterministic clique matches the product form") {
  const auto s = build(ScenarioId::vehicular_pos2);
  SimConfig c = quick(s.graph);
  c.backoff = DistributionKind::deterministic;
  c.tx_time = DistributionKind::deterministic;
  const auto r = simulate(s.graph, c);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(std::abs(r.airtime(i) - 0.25) <= r.airtime_ci95(i) + 1e-4);
  }
}
