#include "ctmn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ctmn/error.hpp"

namespace ctmn {

namespace {

using nlohmann::json;

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw InputError("config error at " + field + ": " + what);
}

double positive_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "must be a number");
  const double d = v.get<double>();
  if (!(std::isfinite(d) && d > 0.0)) fail(path + "." + key, "must be > 0");
  return d;
}

double finite_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  const json& v = obj.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) fail(path + "." + key, "must be a finite number");
  return v.get<double>();
}

Node parse_node(const json& obj, const std::string& path, const std::string& mode) {
  if (!obj.is_object()) fail(path, "must be an object");
  static const std::set<std::string> known{"id", "eb_s", "et_s", "el_bits", "channels", "x", "y", "cs_range"};
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) fail(path + "." + key, "unknown field");
  }
  Node n;
  if (!obj.contains("id") || !obj.at("id").is_string()) fail(path + ".id", "must be a string");
  n.id = obj.at("id").get<std::string>();
  if (n.id.empty()) fail(path + ".id", "must be non-empty");
  n.backoff_mean = positive_number(obj, "eb_s", path);
  n.tx_time_mean = positive_number(obj, "et_s", path);
  n.packet_len_mean = positive_number(obj, "el_bits", path);

  if (obj.contains("channels")) {
    const json& ch = obj.at("channels");
    if (!ch.is_array() || ch.empty()) fail(path + ".channels", "must be a non-empty array of integers");
    for (const json& c : ch) {
      if (!c.is_number_integer()) fail(path + ".channels", "must contain integers");
      n.channels.push_back(c.get<int>());
    }
    std::sort(n.channels.begin(), n.channels.end());
    if (std::adjacent_find(n.channels.begin(), n.channels.end()) != n.channels.end()) {
      fail(path + ".channels", "duplicate channel");
    }
  } else if (mode == "channels") {
    fail(path + ".channels", "required in channels mode");
  }

  const bool geometry = mode == "geometry";
  for (const char* key : {"x", "y", "cs_range"}) {
    if (geometry && !obj.contains(key)) fail(path + "." + key, "required in geometry mode");
    if (!geometry && obj.contains(key)) fail(path + "." + key, "only allowed in geometry mode");
  }
  if (geometry) {
    n.position = Eigen::Vector2d(finite_number(obj, "x", path), finite_number(obj, "y", path));
    n.cs_range = finite_number(obj, "cs_range", path);
    if (*n.cs_range < 0.0) fail(path + ".cs_range", "must be >= 0");
  }
  try {
    validate_node(n);
  } catch (const InputError& e) {
    fail(path, e.what());
  }
  return n;
}

}  // namespace

ConflictGraph parse_network_config(const std::string& text, const ScenarioOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("config error: malformed JSON at " + line_column(text, e.byte));
  }
  if (!doc.is_object()) fail("$", "top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "mode" && key != "nodes" && key != "conflicts") fail("$." + key, "unknown field");
  }
  if (!doc.contains("mode") || !doc.at("mode").is_string()) fail("$.mode", "must be a string");
  const std::string mode = doc.at("mode").get<std::string>();
  if (mode != "pairs" && mode != "geometry" && mode != "channels") {
    fail("$.mode", "must be one of pairs, geometry, channels");
  }
  if (!doc.contains("nodes") || !doc.at("nodes").is_array() || doc.at("nodes").empty()) {
    fail("$.nodes", "must be a non-empty array");
  }

  std::vector<Node> nodes;
  const json& arr = doc.at("nodes");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    nodes.push_back(parse_node(arr[k], "$.nodes[" + std::to_string(k) + "]", mode));
  }

  std::vector<std::pair<std::string, std::string>> pairs;
  if (mode == "pairs") {
    if (!doc.contains("conflicts") || !doc.at("conflicts").is_array()) {
      fail("$.conflicts", "array of id pairs required in pairs mode");
    }
    const json& conf = doc.at("conflicts");
    for (std::size_t k = 0; k < conf.size(); ++k) {
      const json& p = conf[k];
      const std::string path = "$.conflicts[" + std::to_string(k) + "]";
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
        fail(path, "must be a pair of node ids");
      }
      pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
  } else if (doc.contains("conflicts")) {
    fail("$.conflicts", "only allowed in pairs mode");
  }

  apply_overrides(nodes, overrides);
  if (mode == "pairs") return build_from_pairs(std::move(nodes), pairs);
  if (mode == "geometry") return build_from_geometry(std::move(nodes));
  return build_from_channels(std::move(nodes));
}

ConflictGraph load_network_config(const std::string& path, const ScenarioOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_config(buf.str(), overrides);
}

ConflictGraph random_network(int node_count, double edge_probability, std::uint64_t seed, double theta_lo,
                             double theta_hi) {
  if (node_count < 1 || node_count > kMaxNodes) throw InputError("random network size must be in [1, 32]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_theta(std::log(theta_lo), std::log(theta_hi));
  std::bernoulli_distribution edge(edge_probability);
  std::vector<Node> nodes;
  for (int i = 0; i < node_count; ++i) {
    Node n;
    n.id = "n" + std::to_string(i);
    n.tx_time_mean = 1e-3;
    n.packet_len_mean = 12000.0;
    n.backoff_mean = n.tx_time_mean / std::exp(log_theta(rng));
    nodes.push_back(std::move(n));
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < node_count; ++i) {
    for (int j = i + 1; j < node_count; ++j) {
      if (edge(rng)) edges.emplace_back(i, j);
    }
  }
  return ConflictGraph(std::move(nodes), edges);
}

}  // namespace ctmn
