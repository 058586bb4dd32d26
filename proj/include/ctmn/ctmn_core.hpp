#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "ctmn/error.hpp"
#include "ctmn/statespace.hpp"

namespace ctmn {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr std::size_t kDefaultOracleCap = 4096;

/// Stationary probabilities in StateSpace order, with the normalizing
/// constant phi = sum_s prod_{i in s} theta_i (so that pi_empty = 1/phi).
template <typename Scalar = double>
struct StationaryDistribution {
  VectorX<Scalar> pi;
  Scalar phi{};
};

/// theta_i = lambda_i / mu_i = E[T_i] / (c_i * E[B_i]), c_i the bonded channel count.
inline Eigen::VectorXd compute_theta(const std::vector<Node>& nodes) {
  Eigen::VectorXd theta(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    validate_node(nodes[i]);
    theta(static_cast<Eigen::Index>(i)) = nodes[i].attempt_rate() * nodes[i].effective_tx_time();
  }
  return theta;
}

/// Closed-form product-form distribution. Weights are accumulated in the log
/// domain relative to the heaviest state before normalizing.
template <typename Scalar>
StationaryDistribution<Scalar> product_form(const StateSpace& space, const VectorX<Scalar>& theta) {
  using std::exp;
  using std::isfinite;
  using std::log;
  if (theta.size() != space.node_count()) {
    throw InputError("theta has " + std::to_string(theta.size()) + " entries but the state space has " +
                     std::to_string(space.node_count()) + " nodes");
  }
  VectorX<Scalar> log_theta(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!(theta(i) > Scalar(0)) || !isfinite(theta(i))) {
      throw ParameterRangeError("parameter range unsupported: theta must be positive and finite");
    }
    log_theta(i) = log(theta(i));
  }

  const auto n = static_cast<Eigen::Index>(space.size());
  VectorX<Scalar> log_weight(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Scalar acc(0);
    for (Mask rest = space.state(static_cast<std::size_t>(k)); rest != 0; rest &= rest - 1) {
      acc += log_theta(std::countr_zero(rest));
    }
    log_weight(k) = acc;
  }
  const Scalar peak = log_weight.maxCoeff();

  StationaryDistribution<Scalar> dist;
  dist.pi.resize(n);
  Scalar total(0);
  for (Eigen::Index k = 0; k < n; ++k) {
    dist.pi(k) = exp(log_weight(k) - peak);
    total += dist.pi(k);
  }
  dist.pi /= total;
  dist.phi = exp(peak) * total;
  if (!isfinite(dist.phi) || !(dist.phi > Scalar(0))) {
    throw ParameterRangeError("parameter range unsupported: normalizing constant overflows");
  }
  return dist;
}

/// Dense generator matrix Q with Q(s, s') from transition_rate and rows summing to zero.
template <typename Scalar = double>
MatrixX<Scalar> generator_matrix(const StateSpace& space, const std::vector<Node>& nodes) {
  const auto n = static_cast<Eigen::Index>(space.size());
  MatrixX<Scalar> q = MatrixX<Scalar>::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Mask from = space.state(static_cast<std::size_t>(k));
    for (const Transition& t : space.transitions(static_cast<std::size_t>(k))) {
      const auto to = static_cast<Eigen::Index>(t.to);
      q(k, to) = Scalar(transition_rate(space, from, space.state(t.to), nodes));
    }
    q(k, k) = -q.row(k).sum();
  }
  return q;
}

/// Global-balance oracle: solves pi Q = 0 with one equation replaced by sum(pi) = 1.
template <typename Scalar = double>
StationaryDistribution<Scalar> balance_solve(const StateSpace& space, const std::vector<Node>& nodes,
                                             std::size_t oracle_cap = kDefaultOracleCap) {
  using std::abs;
  if (static_cast<int>(nodes.size()) != space.node_count()) {
    throw InputError("node list does not match the state space");
  }
  if (space.size() > oracle_cap) {
    throw StateExplosionError("balance solve limited to " + std::to_string(oracle_cap) + " states, got " +
                              std::to_string(space.size()));
  }
  const auto n = static_cast<Eigen::Index>(space.size());
  const MatrixX<Scalar> q = generator_matrix<Scalar>(space, nodes);

  MatrixX<Scalar> a = q.transpose();
  a.row(n - 1).setOnes();
  VectorX<Scalar> rhs = VectorX<Scalar>::Zero(n);
  rhs(n - 1) = Scalar(1);

  const Eigen::PartialPivLU<MatrixX<Scalar>> lu(a);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  if (!(lu.rcond() > eps)) throw NumericalError("balance system is singular or ill-conditioned");

  StationaryDistribution<Scalar> dist;
  dist.pi = lu.solve(rhs);
  if (!dist.pi.allFinite()) throw NumericalError("balance solve produced non-finite probabilities");

  const Scalar scale = std::max(Scalar(1), q.cwiseAbs().maxCoeff());
  const Scalar residual = (q.transpose() * dist.pi).cwiseAbs().maxCoeff() / scale;
  if (residual > Scalar(1e3) * eps * Scalar(n) || abs(dist.pi.sum() - Scalar(1)) > Scalar(1e3) * eps * Scalar(n)) {
    throw NumericalError("balance solve residual too large");
  }
  dist.phi = Scalar(1) / dist.pi(0);
  return dist;
}

/// Max over adjacent pairs (s, s + i) of |pi_s theta_i - pi_{s+i}| / (pi_s theta_i),
/// which equals the relative flow mismatch |pi_s lambda_i - pi_{s+i} mu_i| / (pi_s lambda_i).
template <typename Scalar>
Scalar check_detailed_balance(const StateSpace& space, const VectorX<Scalar>& theta,
                              const StationaryDistribution<Scalar>& dist) {
  using std::abs;
  Scalar worst(0);
  for (std::size_t k = 0; k < space.size(); ++k) {
    for (const Transition& t : space.transitions(k)) {
      if (t.direction != Direction::up) continue;
      const Scalar down_flow = dist.pi(static_cast<Eigen::Index>(k)) * theta(t.node);
      const Scalar up_flow = dist.pi(static_cast<Eigen::Index>(t.to));
      const Scalar gap = abs(down_flow - up_flow);
      if (gap == Scalar(0)) continue;
      if (down_flow == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
      worst = std::max(worst, gap / down_flow);
    }
  }
  return worst;
}

}  // namespace ctmn
