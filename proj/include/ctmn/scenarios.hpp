#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctmn/throughput.hpp"
#include "ctmn/topology.hpp"

namespace ctmn {

enum class ScenarioId { vehicular_pos1, vehicular_pos2, plc_chain, wlan_bonding };

std::string to_string(ScenarioId id);

/// Throws InputError on an unknown name.
ScenarioId parse_scenario_id(const std::string& name);

const std::vector<ScenarioId>& all_scenarios();

/// Optional replacements for E[B], E[T] (single channel) and E[L].
struct NodeOverrides {
  std::optional<double> backoff_mean;
  std::optional<double> tx_time_mean;
  std::optional<double> packet_len_mean;
};

/// `uniform` applies to every node first, then `per_node` entries by node id.
struct ScenarioOverrides {
  NodeOverrides uniform;
  std::map<std::string, NodeOverrides> per_node;
};

struct Scenario {
  std::string name;
  ConflictGraph graph;

  const std::vector<Node>& nodes() const { return graph.nodes(); }
};

/// Applies overrides in place; throws InputError on non-positive values or unknown ids.
void apply_overrides(std::vector<Node>& nodes, const ScenarioOverrides& overrides);

/// Builds one of the reference networks.
///   vehicular_pos1: A conflicts with B and D; B and D transmit together.
///   vehicular_pos2: A, B, D all within carrier sense of each other.
///   plc_chain:      chain A-E, nodes defer to one- and two-hop neighbours.
///   wlan_bonding:   five co-located WLANs on 1, 1, 2, 4, 8 basic channels.
/// Scenarios without a fixed backoff mean default to E[B] = E[T].
Scenario build(ScenarioId id, const ScenarioOverrides& overrides = {});

/// Conflict pairs (i, j) with 0 < j - i <= hops for a linear chain of `count` nodes.
std::vector<std::pair<int, int>> chain_conflicts(int count, int hops);

/// `points` log-spaced values covering [lo, hi], both ends included.
std::vector<double> log_grid(double lo, double hi, int points);

/// 50 log-spaced backoff means over [E[T]/100, 10 E[T]] of the scenario's first node.
std::vector<double> default_backoff_grid(const Scenario& scenario);

struct SweepRow {
  double backoff_mean;
  ThroughputReport report;
};

/// One analytical solve per grid point with E[B] set uniformly; rows in grid order.
std::vector<SweepRow> sweep_backoff(const ConflictGraph& graph, const std::vector<double>& eb_grid, int jobs = 1);

std::vector<SweepRow> sweep_backoff(ScenarioId id, const std::vector<double>& eb_grid,
                                    const ScenarioOverrides& overrides = {}, int jobs = 1);

/// Product-form analysis of a network in one call.
struct Analysis {
  StateSpace space;
  Eigen::VectorXd theta;
  StationaryDistribution<double> dist;
  ThroughputReport report;
};

Analysis analyze(const ConflictGraph& graph, std::size_t state_cap = kDefaultStateCap);

}  // namespace ctmn
