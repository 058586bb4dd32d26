#pragma once

#include <vector>

#include <Eigen/Core>

#include "ctmn/ctmn_core.hpp"

namespace ctmn {

/// Per-node airtime (fraction of time transmitting) and throughput in bits/s.
struct ThroughputReport {
  Eigen::VectorXd airtime;
  Eigen::VectorXd throughput;
  double total_throughput = 0.0;
};

/// x_i = E[L_i] / (E[T_i] / c_i) * sum_{s containing i} pi_s.
ThroughputReport node_throughput(const StateSpace& space, const StationaryDistribution<double>& dist,
                                 const std::vector<Node>& nodes);

/// Bits per second delivered by a node that transmits for an `airtime` fraction of time.
inline double airtime_to_throughput(const Node& node, double airtime) {
  return node.packet_len_mean * node.service_rate() * airtime;
}

}  // namespace ctmn
