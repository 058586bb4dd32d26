#include "ctmn/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ctmn/error.hpp"
#include "ctmn/parallel.hpp"
#include "ctmn/throughput.hpp"

namespace ctmn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, int node, int replication) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (static_cast<std::uint64_t>(replication) + 1) * 0xd1b54a32d192ed03ULL);
  return splitmix64(s ^ (static_cast<std::uint64_t>(node) + 1) * 0xaef17502108ef2d9ULL);
}

/// Neumaier compensated sum; occupancy times are many small increments.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) carry += (sum - t) + x;
    else carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

ReplicationResult run_replication(const ConflictGraph& graph, const StateSpace& space, const SimConfig& config,
                                  int replication) {
  const int n = graph.size();
  std::vector<std::mt19937_64> rng;
  std::vector<DistributionSpec> backoff(n), tx(n);
  rng.reserve(n);
  for (int i = 0; i < n; ++i) {
    rng.emplace_back(stream_seed(config.seed, i, replication));
    backoff[i] = {config.backoff, graph.node(i).backoff_mean};
    tx[i] = {config.tx_time, graph.node(i).effective_tx_time()};
  }

  // deadline: tx end when transmitting, backoff expiry when counting down, +inf when frozen.
  std::vector<double> deadline(n), residual(n);
  for (int i = 0; i < n; ++i) {
    residual[i] = backoff[i].sample_residual(rng[i]);
    deadline[i] = residual[i];
  }

  const double start = config.warmup;
  const double end = config.warmup + config.measure;
  std::vector<CompensatedSum> occupancy(space.size());
  Mask active = 0;
  std::size_t current = space.index_of(active);
  double now = 0.0;
  std::uint64_t events = 0;

  auto accumulate = [&](double from, double to) {
    const double lo = std::max(from, start);
    const double hi = std::min(to, end);
    if (hi > lo) occupancy[current].add(hi - lo);
  };

  while (true) {
    int next = 0;
    for (int i = 1; i < n; ++i) {
      if (deadline[i] < deadline[next]) next = i;
    }
    const double t = deadline[next];
    if (!(t < end)) {
      accumulate(now, end);
      break;
    }
    accumulate(now, t);
    now = t;
    ++events;

    if (active & bit(next)) {
      active &= ~bit(next);
      residual[next] = backoff[next].sample(rng[next]);
      deadline[next] = kInf;
      for (int j = 0; j < n; ++j) {
        if (!(active & bit(j)) && deadline[j] == kInf && (graph.neighbors(j) & active) == 0) {
          deadline[j] = now + residual[j];
        }
      }
    } else {
      if (graph.neighbors(next) & active) {
        throw std::logic_error("simulator reached an infeasible state");
      }
      active |= bit(next);
      deadline[next] = now + tx[next].sample(rng[next]);
      for (Mask rest = graph.neighbors(next); rest != 0; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        if (!(active & bit(j)) && deadline[j] != kInf) {
          residual[j] = std::max(0.0, deadline[j] - now);
          deadline[j] = kInf;
        }
      }
    }
    current = space.index_of(active);
  }

  ReplicationResult out;
  out.events = events;
  out.state_fraction.resize(static_cast<Eigen::Index>(space.size()));
  CompensatedSum total;
  for (std::size_t k = 0; k < space.size(); ++k) {
    const double v = occupancy[k].value();
    total.add(v);
    out.state_fraction(static_cast<Eigen::Index>(k)) = v / config.measure;
  }
  out.partition_error = std::abs(total.value() - config.measure) / config.measure;
  out.airtime = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < space.size(); ++k) {
    for (Mask rest = space.state(k); rest != 0; rest &= rest - 1) {
      out.airtime(std::countr_zero(rest)) += out.state_fraction(static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

/// Column-wise mean and 95% half-width of `samples` (one row per replication).
void summarize(const Eigen::MatrixXd& samples, Eigen::VectorXd& mean, Eigen::VectorXd& half_width) {
  const auto reps = samples.rows();
  mean = samples.colwise().mean().transpose();
  half_width.resize(samples.cols());
  if (reps < 2) {
    half_width.setConstant(kInf);
    return;
  }
  const double t = t_critical_95(static_cast<int>(reps - 1));
  for (Eigen::Index c = 0; c < samples.cols(); ++c) {
    const double var = (samples.col(c).array() - mean(c)).square().sum() / static_cast<double>(reps - 1);
    half_width(c) = t * std::sqrt(var / static_cast<double>(reps));
  }
}

}  // namespace

std::string to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::deterministic: return "deterministic";
    case DistributionKind::uniform: return "uniform";
  }
  return "?";
}

DistributionKind parse_distribution_kind(const std::string& name) {
  if (name == "exponential" || name == "exp") return DistributionKind::exponential;
  if (name == "deterministic" || name == "det") return DistributionKind::deterministic;
  if (name == "uniform" || name == "uni") return DistributionKind::uniform;
  throw InputError("unknown distribution '" + name + "' (expected exponential, deterministic or uniform)");
}

double DistributionSpec::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case DistributionKind::exponential: return std::exponential_distribution<double>(1.0 / mean)(rng);
    case DistributionKind::deterministic: return mean;
    case DistributionKind::uniform: return std::uniform_real_distribution<double>(0.0, 2.0 * mean)(rng);
  }
  return mean;
}

double DistributionSpec::sample_residual(std::mt19937_64& rng) const {
  switch (kind) {
    case DistributionKind::exponential: return std::exponential_distribution<double>(1.0 / mean)(rng);
    case DistributionKind::deterministic: return std::uniform_real_distribution<double>(0.0, mean)(rng);
    case DistributionKind::uniform: {
      // density (2m - x) / (2 m^2) on [0, 2m], by inversion
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      return 2.0 * mean * (1.0 - std::sqrt(1.0 - u));
    }
  }
  return mean;
}

SimConfig default_sim_config(const std::vector<Node>& nodes) {
  double longest = 0.0;
  for (const auto& n : nodes) longest = std::max(longest, n.tx_time_mean);
  SimConfig config;
  config.warmup = 1e3 * longest;
  config.measure = 1e5 * longest;
  config.replications = 10;
  return config;
}

void validate(const SimConfig& config) {
  if (!std::isfinite(config.warmup) || config.warmup < 0.0) throw InputError("warmup must be >= 0");
  if (!std::isfinite(config.measure) || config.measure <= 0.0) throw InputError("measurement window must be > 0");
  if (config.replications < 1) throw InputError("replications must be >= 1");
  if (config.jobs < 1) throw InputError("jobs must be >= 1");
}

SimResult simulate(const ConflictGraph& graph, const StateSpace& space, const SimConfig& config) {
  validate(config);
  if (space.node_count() != graph.size()) throw InputError("state space does not match the conflict graph");

  const int reps = config.replications;
  std::vector<ReplicationResult> results(static_cast<std::size_t>(reps));
  parallel_for(results.size(), config.jobs, [&](std::size_t r) {
    results[r] = run_replication(graph, space, config, static_cast<int>(r));
  });

  const auto n = static_cast<Eigen::Index>(graph.size());
  const auto states = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd airtime(reps, n), throughput(reps, n), fractions(reps, states);
  for (int r = 0; r < reps; ++r) {
    const auto& rep = results[static_cast<std::size_t>(r)];
    airtime.row(r) = rep.airtime.transpose();
    fractions.row(r) = rep.state_fraction.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      throughput(r, i) = airtime_to_throughput(graph.node(static_cast<int>(i)), rep.airtime(i));
    }
  }

  SimResult out;
  summarize(airtime, out.airtime, out.airtime_ci95);
  summarize(throughput, out.throughput, out.throughput_ci95);
  summarize(fractions, out.pi_hat, out.pi_hat_ci95);
  out.replications = std::move(results);
  return out;
}

SimResult simulate(const ConflictGraph& graph, const SimConfig& config) {
  return simulate(graph, enumerate(graph), config);
}

bool InsensitivityReport::all_pass() const {
  return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; });
}

InsensitivityReport insensitivity_check(const ConflictGraph& graph, const SimConfig& config, double tolerance) {
  const StateSpace space = enumerate(graph);
  constexpr std::array kinds{DistributionKind::exponential, DistributionKind::deterministic,
                             DistributionKind::uniform};
  InsensitivityReport report;
  report.tolerance = tolerance;
  for (auto b : kinds) {
    for (auto t : kinds) {
      SimConfig c = config;
      c.backoff = b;
      c.tx_time = t;
      report.runs.push_back({b, t, simulate(graph, space, c)});
    }
  }

  const auto n = static_cast<Eigen::Index>(graph.size());
  const Eigen::VectorXd& reference = report.runs.front().result.airtime;
  report.max_discrepancy = Eigen::VectorXd::Zero(n);
  report.ci_overlap.assign(static_cast<std::size_t>(n), true);
  report.pass.assign(static_cast<std::size_t>(n), true);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < report.runs.size(); ++a) {
      for (std::size_t b = a + 1; b < report.runs.size(); ++b) {
        const auto& ra = report.runs[a].result;
        const auto& rb = report.runs[b].result;
        const double gap = std::abs(ra.airtime(i) - rb.airtime(i));
        const double rel = reference(i) > 0.0 ? gap / reference(i) : (gap > 0.0 ? kInf : 0.0);
        report.max_discrepancy(i) = std::max(report.max_discrepancy(i), rel);
        if (gap > ra.airtime_ci95(i) + rb.airtime_ci95(i)) report.ci_overlap[static_cast<std::size_t>(i)] = false;
      }
    }
    const auto k = static_cast<std::size_t>(i);
    report.pass[k] = report.ci_overlap[k] && report.max_discrepancy(i) < tolerance;
  }
  return report;
}

double t_critical_95(int degrees_of_freedom) {
  static constexpr std::array<double, 30> table{
      12.706205, 4.302653, 3.182446, 2.776445, 2.570582, 2.446912, 2.364624, 2.306004, 2.262157, 2.228139,
      2.200985,  2.178813, 2.160369, 2.144787, 2.131450, 2.119905, 2.109816, 2.100922, 2.093024, 2.085963,
      2.079614,  2.073873, 2.068658, 2.063899, 2.059539, 2.055529, 2.051831, 2.048407, 2.045230, 2.042272};
  if (degrees_of_freedom < 1) throw InputError("degrees of freedom must be >= 1");
  if (degrees_of_freedom <= 30) return table[static_cast<std::size_t>(degrees_of_freedom - 1)];
  // Cornish-Fisher expansion around the normal quantile; error < 1e-5 for df > 30.
  const double z = 1.959963984540054;
  const double d = degrees_of_freedom;
  const double g1 = (z * z * z + z) / 4.0;
  const double g2 = (5 * std::pow(z, 5) + 16 * std::pow(z, 3) + 3 * z) / 96.0;
  const double g3 = (3 * std::pow(z, 7) + 19 * std::pow(z, 5) + 17 * std::pow(z, 3) - 15 * z) / 384.0;
  return z + g1 / d + g2 / (d * d) + g3 / (d * d * d);
}

}  // namespace ctmn
