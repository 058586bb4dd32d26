#include "ctmn/throughput.hpp"

#include "ctmn/error.hpp"

namespace ctmn {

ThroughputReport node_throughput(const StateSpace& space, const StationaryDistribution<double>& dist,
                                 const std::vector<Node>& nodes) {
  if (static_cast<int>(nodes.size()) != space.node_count() ||
      dist.pi.size() != static_cast<Eigen::Index>(space.size())) {
    throw InputError("distribution, state space and nodes disagree in size");
  }
  const auto n = static_cast<Eigen::Index>(nodes.size());
  ThroughputReport report;
  report.airtime = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < space.size(); ++k) {
    for (Mask rest = space.state(k); rest != 0; rest &= rest - 1) {
      report.airtime(std::countr_zero(rest)) += dist.pi(static_cast<Eigen::Index>(k));
    }
  }
  report.throughput.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    report.throughput(i) = airtime_to_throughput(nodes[static_cast<std::size_t>(i)], report.airtime(i));
  }
  report.total_throughput = report.throughput.sum();
  return report;
}

}  // namespace ctmn
