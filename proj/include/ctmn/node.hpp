#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ctmn {

/// Bit-vector over the canonical node order; bit i set means node i transmits.
using Mask = std::uint32_t;

inline constexpr int kMaxNodes = 32;

inline constexpr Mask bit(int i) { return Mask{1} << i; }

/// One saturated CSMA/CA contender. Times are seconds, lengths bits.
struct Node {
  std::string id;
  double backoff_mean = 0.0;     // E[B]
  double tx_time_mean = 0.0;     // E[T] on a single basic channel
  double packet_len_mean = 0.0;  // E[L]
  std::vector<int> channels;     // basic channel indices, sorted; may be empty
  std::optional<Eigen::Vector2d> position;
  std::optional<double> cs_range;

  /// Number of bonded basic channels (1 when no channel set is given).
  int width() const { return channels.empty() ? 1 : static_cast<int>(channels.size()); }

  /// Mean transmission time on the node's full (possibly bonded) channel.
  double effective_tx_time() const { return tx_time_mean / width(); }

  double attempt_rate() const { return 1.0 / backoff_mean; }
  double service_rate() const { return width() / tx_time_mean; }
};

/// Throws InputError if a node violates its invariants.
void validate_node(const Node& node);

/// Throws InputError on an invalid node or a duplicated id.
void validate_nodes(const std::vector<Node>& nodes);

}  // namespace ctmn
