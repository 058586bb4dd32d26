#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctmn/topology.hpp"

namespace ctmn {

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 20;

enum class Direction { up, down };

/// One single-node toggle out of a state.
struct Transition {
  std::size_t to;  // index into StateSpace::states()
  int node;
  Direction direction;
};

/// All independent sets of a conflict graph, ordered by (popcount, mask),
/// with the add/remove-one-node adjacency between them.
class StateSpace {
 public:
  std::size_t size() const { return states_.size(); }
  int node_count() const { return node_count_; }

  const std::vector<Mask>& states() const { return states_; }
  Mask state(std::size_t k) const { return states_[k]; }

  bool contains(Mask mask) const { return index_.count(mask) != 0; }

  /// Position of `mask`; throws InputError when the state is infeasible.
  std::size_t index_of(Mask mask) const;

  const std::vector<Transition>& transitions(std::size_t k) const { return adjacency_[k]; }

  friend StateSpace enumerate(const ConflictGraph& graph, std::size_t state_cap);

 private:
  int node_count_ = 0;
  std::vector<Mask> states_;
  std::unordered_map<Mask, std::size_t> index_;
  std::vector<std::vector<Transition>> adjacency_;
};

/// Throws StateExplosionError when more than `state_cap` states exist.
StateSpace enumerate(const ConflictGraph& graph, std::size_t state_cap = kDefaultStateCap);

/// Rate of the jump from -> to: attempt rate on an add, service rate on a removal, else 0.
double transition_rate(const StateSpace& space, Mask from, Mask to, const std::vector<Node>& nodes);

/// States with no feasible single-node extension.
std::vector<Mask> maximal_states(const StateSpace& space);

/// Member ids sorted lexicographically; "-" for the empty state. Ids are joined
/// directly when all are one character long and with '+' otherwise.
std::string state_label(Mask mask, const std::vector<Node>& nodes);

}  // namespace ctmn
