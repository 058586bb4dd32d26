#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ctmn/statespace.hpp"

namespace ctmn {

enum class DistributionKind { exponential, deterministic, uniform };

std::string to_string(DistributionKind kind);

/// Throws InputError on an unknown name.
DistributionKind parse_distribution_kind(const std::string& name);

/// A non-negative duration distribution; uniform spans [0, 2 * mean].
struct DistributionSpec {
  DistributionKind kind = DistributionKind::exponential;
  double mean = 1.0;

  double sample(std::mt19937_64& rng) const;

  /// Draw from the stationary residual-life (equilibrium excess) distribution,
  /// density (1 - F(x)) / mean. Used for the first backoff so that node clocks
  /// do not start phase-locked.
  double sample_residual(std::mt19937_64& rng) const;
};

struct SimConfig {
  std::uint64_t seed = 1;
  double warmup = 0.0;   // seconds discarded before measuring
  double measure = 1.0;  // measured seconds per replication
  int replications = 10;
  DistributionKind backoff = DistributionKind::exponential;
  DistributionKind tx_time = DistributionKind::exponential;
  int jobs = 1;  // worker threads for replications
};

/// Warmup 1e3 and measurement 1e5 times the largest single-channel E[T]; 10 replications.
SimConfig default_sim_config(const std::vector<Node>& nodes);

void validate(const SimConfig& config);

struct ReplicationResult {
  Eigen::VectorXd state_fraction;  // empirical pi per feasible state
  Eigen::VectorXd airtime;         // per node
  double partition_error = 0.0;    // |sum of state times - window| / window
  std::uint64_t events = 0;
};

struct SimResult {
  Eigen::VectorXd airtime;
  Eigen::VectorXd airtime_ci95;  // half-widths across replications
  Eigen::VectorXd throughput;    // bits/s
  Eigen::VectorXd throughput_ci95;
  Eigen::VectorXd pi_hat;
  Eigen::VectorXd pi_hat_ci95;
  std::vector<ReplicationResult> replications;
};

/// Event-driven simulation of saturated nodes with continuous backoff that
/// freezes while any conflicting neighbor transmits. Deterministic for a
/// given (seed, config, node order); simultaneous expiries resolve by index.
SimResult simulate(const ConflictGraph& graph, const StateSpace& space, const SimConfig& config);

/// Convenience overload that enumerates the state space itself.
SimResult simulate(const ConflictGraph& graph, const SimConfig& config);

struct InsensitivityRun {
  DistributionKind backoff;
  DistributionKind tx_time;
  SimResult result;
};

struct InsensitivityReport {
  std::vector<InsensitivityRun> runs;  // exponential/exponential first
  Eigen::VectorXd max_discrepancy;     // max pairwise |a - b| relative to the exponential airtime
  std::vector<bool> ci_overlap;        // every pair of 95% intervals overlaps
  std::vector<bool> pass;              // overlap and discrepancy below tolerance
  double tolerance = 0.02;

  bool all_pass() const;
};

/// Runs simulate for every (backoff, tx) pair in {exponential, deterministic, uniform}^2
/// with unchanged means. The distribution kinds in `config` are ignored.
InsensitivityReport insensitivity_check(const ConflictGraph& graph, const SimConfig& config,
                                        double tolerance = 0.02);

/// Two-sided 95% Student-t critical value.
double t_critical_95(int degrees_of_freedom);

}  // namespace ctmn
