#include "ctmn/topology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "ctmn/error.hpp"

namespace ctmn {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate_node(const Node& node) {
  const std::string who = "node '" + node.id + "': ";
  if (node.id.empty()) throw InputError("node id must be non-empty");
  if (!positive_finite(node.backoff_mean)) throw InputError(who + "backoff mean must be > 0");
  if (!positive_finite(node.tx_time_mean)) throw InputError(who + "transmission time mean must be > 0");
  if (!positive_finite(node.packet_len_mean)) throw InputError(who + "packet length mean must be > 0");
  if (!node.channels.empty()) {
    for (std::size_t k = 1; k < node.channels.size(); ++k) {
      if (node.channels[k] != node.channels[k - 1] + 1) {
        throw InputError(who + "channels must be a sorted contiguous block of basic channels");
      }
    }
    if (!std::has_single_bit(node.channels.size())) {
      throw InputError(who + "number of bonded channels must be a power of two");
    }
  }
  if (node.cs_range && !(std::isfinite(*node.cs_range) && *node.cs_range >= 0.0)) {
    throw InputError(who + "carrier sense range must be >= 0");
  }
  if (node.position && !node.position->allFinite()) {
    throw InputError(who + "position must be finite");
  }
}

void validate_nodes(const std::vector<Node>& nodes) {
  if (nodes.empty()) throw InputError("network has no nodes");
  if (nodes.size() > static_cast<std::size_t>(kMaxNodes)) {
    throw InputError("network has " + std::to_string(nodes.size()) + " nodes; at most " +
                     std::to_string(kMaxNodes) + " are supported");
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : nodes) {
    validate_node(n);
    if (!seen.insert(n.id).second) throw InputError("duplicate node id '" + n.id + "'");
  }
}

ConflictGraph::ConflictGraph(std::vector<Node> nodes, const std::vector<std::pair<int, int>>& edges)
    : nodes_(std::move(nodes)) {
  validate_nodes(nodes_);
  neighbors_.assign(nodes_.size(), 0);
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= size() || j >= size()) throw InputError("edge endpoint out of range");
    if (i == j) throw InputError("node '" + nodes_[i].id + "' cannot conflict with itself");
    neighbors_[i] |= bit(j);
    neighbors_[j] |= bit(i);
  }
}

bool ConflictGraph::independent(Mask mask) const {
  for (Mask rest = mask; rest != 0; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    if (neighbors_[i] & mask) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> ConflictGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (conflicts(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

int ConflictGraph::index_of(const std::string& id) const {
  for (int i = 0; i < size(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  return -1;
}

ConflictGraph build_from_pairs(std::vector<Node> nodes,
                               const std::vector<std::pair<std::string, std::string>>& conflict_pairs) {
  validate_nodes(nodes);
  auto lookup = [&](const std::string& id) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].id == id) return static_cast<int>(i);
    }
    throw InputError("conflict pair references unknown node id '" + id + "'");
  };
  std::vector<std::pair<int, int>> edges;
  edges.reserve(conflict_pairs.size());
  for (const auto& [a, b] : conflict_pairs) {
    if (a == b) throw InputError("self conflict pair ('" + a + "', '" + b + "')");
    edges.emplace_back(lookup(a), lookup(b));
  }
  return ConflictGraph(std::move(nodes), edges);
}

ConflictGraph build_from_geometry(std::vector<Node> nodes) {
  validate_nodes(nodes);
  for (const auto& n : nodes) {
    if (!n.position || !n.cs_range) {
      throw InputError("node '" + n.id + "': geometry mode requires a position and a carrier sense range");
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const double dist = (*nodes[i].position - *nodes[j].position).norm();
      if (dist <= std::max(*nodes[i].cs_range, *nodes[j].cs_range)) {
        edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return ConflictGraph(std::move(nodes), edges);
}

ConflictGraph build_from_channels(std::vector<Node> nodes) {
  validate_nodes(nodes);
  for (const auto& n : nodes) {
    if (n.channels.empty()) throw InputError("node '" + n.id + "': channel mode requires a non-empty channel set");
  }
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const auto& a = nodes[i].channels;
      const auto& b = nodes[j].channels;
      // both sorted
      auto ia = a.begin();
      auto ib = b.begin();
      bool shared = false;
      while (ia != a.end() && ib != b.end() && !shared) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else shared = true;
      }
      if (shared) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return ConflictGraph(std::move(nodes), edges);
}

}  // namespace ctmn
