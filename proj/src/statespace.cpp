#include "ctmn/statespace.hpp"

#include <algorithm>
#include <bit>

#include "ctmn/error.hpp"

namespace ctmn {

std::size_t StateSpace::index_of(Mask mask) const {
  auto it = index_.find(mask);
  if (it == index_.end()) throw InputError("state " + std::to_string(mask) + " is not feasible");
  return it->second;
}

StateSpace enumerate(const ConflictGraph& graph, std::size_t state_cap) {
  const int n = graph.size();
  if (n > kMaxNodes) throw InputError("too many nodes for a 32-bit state mask");

  StateSpace space;
  space.node_count_ = n;

  // Breadth-first: extend each state only by nodes above its highest member,
  // so every independent set is produced exactly once, one popcount layer at a time.
  std::vector<Mask> layer{0};
  while (!layer.empty()) {
    std::sort(layer.begin(), layer.end());
    space.states_.insert(space.states_.end(), layer.begin(), layer.end());
    if (space.states_.size() > state_cap) {
      throw StateExplosionError("state explosion: more than " + std::to_string(state_cap) +
                                " feasible states");
    }
    std::vector<Mask> next;
    for (Mask s : layer) {
      const int start = s == 0 ? 0 : 32 - std::countl_zero(s);
      for (int i = start; i < n; ++i) {
        if ((graph.neighbors(i) & s) == 0) {
          next.push_back(s | bit(i));
          if (space.states_.size() + next.size() > state_cap) {
            throw StateExplosionError("state explosion: more than " + std::to_string(state_cap) +
                                      " feasible states");
          }
        }
      }
    }
    layer = std::move(next);
  }

  space.index_.reserve(space.states_.size());
  for (std::size_t k = 0; k < space.states_.size(); ++k) space.index_.emplace(space.states_[k], k);

  space.adjacency_.resize(space.states_.size());
  for (std::size_t k = 0; k < space.states_.size(); ++k) {
    const Mask s = space.states_[k];
    for (int i = 0; i < n; ++i) {
      if (s & bit(i)) {
        space.adjacency_[k].push_back({space.index_.at(s & ~bit(i)), i, Direction::down});
      } else if ((graph.neighbors(i) & s) == 0) {
        space.adjacency_[k].push_back({space.index_.at(s | bit(i)), i, Direction::up});
      }
    }
  }
  return space;
}

double transition_rate(const StateSpace& space, Mask from, Mask to, const std::vector<Node>& nodes) {
  space.index_of(from);
  space.index_of(to);
  const Mask diff = from ^ to;
  if (std::popcount(diff) != 1) return 0.0;
  const int i = std::countr_zero(diff);
  return (to & diff) ? nodes.at(i).attempt_rate() : nodes.at(i).service_rate();
}

std::vector<Mask> maximal_states(const StateSpace& space) {
  std::vector<Mask> out;
  for (std::size_t k = 0; k < space.size(); ++k) {
    const auto& tr = space.transitions(k);
    const bool extendable =
        std::any_of(tr.begin(), tr.end(), [](const Transition& t) { return t.direction == Direction::up; });
    if (!extendable) out.push_back(space.state(k));
  }
  return out;
}

std::string state_label(Mask mask, const std::vector<Node>& nodes) {
  if (mask == 0) return "-";
  std::vector<std::string> ids;
  bool short_ids = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    short_ids = short_ids && nodes[i].id.size() == 1;
    if (mask & bit(static_cast<int>(i))) ids.push_back(nodes[i].id);
  }
  std::sort(ids.begin(), ids.end());
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty() && !short_ids) out += '+';
    out += id;
  }
  return out;
}

}  // namespace ctmn
