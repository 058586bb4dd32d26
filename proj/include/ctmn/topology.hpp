#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctmn/node.hpp"

namespace ctmn {

/// Symmetric, irreflexive "cannot transmit simultaneously" relation.
/// Node order is the canonical order for every downstream bit-vector.
class ConflictGraph {
 public:
  ConflictGraph() = default;

  /// Edges are given by node index and symmetrized. Validates nodes.
  ConflictGraph(std::vector<Node> nodes, const std::vector<std::pair<int, int>>& edges);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[i]; }

  bool conflicts(int i, int j) const { return (neighbors_[i] & bit(j)) != 0; }
  Mask neighbors(int i) const { return neighbors_[i]; }

  /// True when no two members of `mask` are neighbors.
  bool independent(Mask mask) const;

  /// All edges (i, j) with i < j, in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;

  /// Index of the node with the given id, or -1.
  int index_of(const std::string& id) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Mask> neighbors_;
};

ConflictGraph build_from_pairs(std::vector<Node> nodes,
                               const std::vector<std::pair<std::string, std::string>>& conflict_pairs);

/// edge(i, j) iff dist(i, j) <= max(cs_range_i, cs_range_j).
ConflictGraph build_from_geometry(std::vector<Node> nodes);

/// edge(i, j) iff the channel sets intersect. Assumes all nodes are co-located.
ConflictGraph build_from_channels(std::vector<Node> nodes);

}  // namespace ctmn
