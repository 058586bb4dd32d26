#include "ctmn/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "ctmn/error.hpp"
#include "ctmn/parallel.hpp"

namespace ctmn {

namespace {

constexpr double kVehicularTx = 3e-3;
constexpr double kVehicularLen = 8000.0;
constexpr double kPlcTx = 1359.02e-6;
constexpr double kPlcLen = 12000.0;
constexpr double kWlanTx = 0.1e-3;
constexpr double kWlanBackoff = 50e-6;
constexpr double kWlanLen = 12000.0;

Node make_node(std::string id, double eb, double et, double el, std::vector<int> channels = {}) {
  Node n;
  n.id = std::move(id);
  n.backoff_mean = eb;
  n.tx_time_mean = et;
  n.packet_len_mean = el;
  n.channels = std::move(channels);
  return n;
}

void apply(Node& node, const NodeOverrides& o) {
  auto check = [&](const std::optional<double>& v, const char* what) {
    if (v && !(std::isfinite(*v) && *v > 0.0)) {
      throw InputError(std::string("override ") + what + " for node '" + node.id + "' must be > 0");
    }
  };
  check(o.backoff_mean, "E[B]");
  check(o.tx_time_mean, "E[T]");
  check(o.packet_len_mean, "E[L]");
  if (o.backoff_mean) node.backoff_mean = *o.backoff_mean;
  if (o.tx_time_mean) node.tx_time_mean = *o.tx_time_mean;
  if (o.packet_len_mean) node.packet_len_mean = *o.packet_len_mean;
}

}  // namespace

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::vehicular_pos1: return "vehicular_pos1";
    case ScenarioId::vehicular_pos2: return "vehicular_pos2";
    case ScenarioId::plc_chain: return "plc_chain";
    case ScenarioId::wlan_bonding: return "wlan_bonding";
  }
  return "?";
}

ScenarioId parse_scenario_id(const std::string& name) {
  for (ScenarioId id : all_scenarios()) {
    if (to_string(id) == name) return id;
  }
  throw InputError("unknown scenario '" + name +
                   "' (expected vehicular_pos1, vehicular_pos2, plc_chain or wlan_bonding)");
}

const std::vector<ScenarioId>& all_scenarios() {
  static const std::vector<ScenarioId> ids{ScenarioId::vehicular_pos1, ScenarioId::vehicular_pos2,
                                           ScenarioId::plc_chain, ScenarioId::wlan_bonding};
  return ids;
}

void apply_overrides(std::vector<Node>& nodes, const ScenarioOverrides& overrides) {
  for (auto& n : nodes) apply(n, overrides.uniform);
  for (const auto& [id, o] : overrides.per_node) {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.id == id; });
    if (it == nodes.end()) throw InputError("override references unknown node id '" + id + "'");
    apply(*it, o);
  }
}

std::vector<std::pair<int, int>> chain_conflicts(int count, int hops) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count && j - i <= hops; ++j) edges.emplace_back(i, j);
  }
  return edges;
}

Scenario build(ScenarioId id, const ScenarioOverrides& overrides) {
  std::vector<Node> nodes;
  std::vector<std::pair<int, int>> edges;
  switch (id) {
    case ScenarioId::vehicular_pos1:
    case ScenarioId::vehicular_pos2:
      // C and E only receive.
      for (const char* name : {"A", "B", "D"}) {
        nodes.push_back(make_node(name, kVehicularTx, kVehicularTx, kVehicularLen));
      }
      edges = {{0, 1}, {0, 2}};
      if (id == ScenarioId::vehicular_pos2) edges.emplace_back(1, 2);
      break;
    case ScenarioId::plc_chain:
      for (const char* name : {"A", "B", "C", "D", "E"}) nodes.push_back(make_node(name, kPlcTx, kPlcTx, kPlcLen));
      edges = chain_conflicts(5, 2);
      break;
    case ScenarioId::wlan_bonding: {
      const std::vector<std::vector<int>> channels{{1}, {5}, {7, 8}, {1, 2, 3, 4}, {1, 2, 3, 4, 5, 6, 7, 8}};
      const char* names[] = {"A", "B", "C", "D", "E"};
      for (std::size_t i = 0; i < channels.size(); ++i) {
        nodes.push_back(make_node(names[i], kWlanBackoff, kWlanTx, kWlanLen, channels[i]));
      }
      apply_overrides(nodes, overrides);
      return {to_string(id), build_from_channels(std::move(nodes))};
    }
  }
  apply_overrides(nodes, overrides);
  return {to_string(id), ConflictGraph(std::move(nodes), edges)};
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw InputError("invalid log grid");
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = std::log(hi / lo) / (points - 1);
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = lo * std::exp(step * k);
  grid.back() = hi;
  return grid;
}

std::vector<double> default_backoff_grid(const Scenario& scenario) {
  const double et = scenario.nodes().front().tx_time_mean;
  return log_grid(et / 100.0, 10.0 * et, 50);
}

Analysis analyze(const ConflictGraph& graph, std::size_t state_cap) {
  Analysis a{enumerate(graph, state_cap), compute_theta(graph.nodes()), {}, {}};
  a.dist = product_form(a.space, a.theta);
  a.report = node_throughput(a.space, a.dist, graph.nodes());
  return a;
}

std::vector<SweepRow> sweep_backoff(const ConflictGraph& graph, const std::vector<double>& eb_grid, int jobs) {
  if (eb_grid.empty()) throw InputError("backoff grid is empty");
  for (double eb : eb_grid) {
    if (!(std::isfinite(eb) && eb > 0.0)) throw InputError("backoff grid values must be > 0");
  }
  const StateSpace space = enumerate(graph);

  std::vector<SweepRow> rows(eb_grid.size());
  parallel_for(rows.size(), jobs, [&](std::size_t k) {
    std::vector<Node> nodes = graph.nodes();
    for (auto& n : nodes) n.backoff_mean = eb_grid[k];
    const auto dist = product_form(space, compute_theta(nodes));
    rows[k] = {eb_grid[k], node_throughput(space, dist, nodes)};
  });
  return rows;
}

std::vector<SweepRow> sweep_backoff(ScenarioId id, const std::vector<double>& eb_grid,
                                    const ScenarioOverrides& overrides, int jobs) {
  return sweep_backoff(build(id, overrides).graph, eb_grid, jobs);
}

}  // namespace ctmn
