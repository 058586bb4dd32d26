#include "ctmn/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ctmn/config.hpp"
#include "ctmn/error.hpp"
#include "ctmn/simulator.hpp"

namespace ctmn::cli {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::size_t state_cap_from_env() {
  const char* raw = std::getenv("CTMN_STATE_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultStateCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) throw InputError("CTMN_STATE_CAP must be a positive integer");
  return static_cast<std::size_t>(v);
}

int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Flags shared by every subcommand that reads a network.
struct InputOptions {
  std::string scenario;
  std::string config;
  int random_nodes = 0;
  std::optional<double> eb, et, el;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd, bool allow_random) {
    cmd->add_option("--scenario", scenario, "built-in scenario name");
    cmd->add_option("--config", config, "JSON network description");
    if (allow_random) cmd->add_option("--random", random_nodes, "random network with N nodes (uses --seed)");
    cmd->add_option("--eb", eb, "override E[B] for every node (s)");
    cmd->add_option("--et", et, "override single-channel E[T] for every node (s)");
    cmd->add_option("--el", el, "override E[L] for every node (bits)");
  }

  ScenarioOverrides overrides() const {
    ScenarioOverrides o;
    o.uniform = {eb, et, el};
    return o;
  }

  std::string describe() const {
    if (!scenario.empty()) return "scenario:" + scenario;
    if (!config.empty()) return "config:" + config;
    return "random:" + std::to_string(random_nodes) + ":seed=" + std::to_string(seed);
  }

  ConflictGraph load() const {
    const int given = int(!scenario.empty()) + int(!config.empty()) + int(random_nodes > 0);
    if (given != 1) throw InputError("exactly one of --scenario, --config or --random is required");
    if (!scenario.empty()) return build(parse_scenario_id(scenario), overrides()).graph;
    if (!config.empty()) return load_network_config(config, overrides());
    ConflictGraph g = random_network(random_nodes, 0.3, seed);
    std::vector<Node> nodes = g.nodes();
    apply_overrides(nodes, overrides());
    return ConflictGraph(std::move(nodes), g.edges());
  }
};

void write_header(std::ostream& os, const std::string& command, const InputOptions& in) {
  os << "# ctmn " << CTMN_VERSION << ' ' << command << '\n';
  os << "# source=" << in.describe() << '\n';
}

void write_nodes_meta(std::ostream& os, const std::vector<Node>& nodes) {
  for (const auto& n : nodes) {
    os << "# node " << n.id << " eb_s=" << fmt6(n.backoff_mean) << " et_s=" << fmt6(n.tx_time_mean)
       << " el_bits=" << fmt6(n.packet_len_mean) << " width=" << n.width() << '\n';
  }
}

void write_state_table(std::ostream& os, const StateSpace& space, const std::vector<Node>& nodes,
                       const Eigen::VectorXd& pi) {
  os << "state,mask,pi\n";
  for (std::size_t k = 0; k < space.size(); ++k) {
    os << state_label(space.state(k), nodes) << ',' << space.state(k) << ','
       << fmt6(pi(static_cast<Eigen::Index>(k))) << '\n';
  }
}

void analyze_csv(std::ostream& os, const ConflictGraph& graph, const InputOptions& in) {
  const Analysis a = analyze(graph, state_cap_from_env());
  write_header(os, "analyze", in);
  os << "# nodes=" << graph.size() << " states=" << a.space.size() << " phi=" << fmt6(a.dist.phi) << '\n';
  write_nodes_meta(os, graph.nodes());
  write_state_table(os, a.space, graph.nodes(), a.dist.pi);
  os << '\n' << "node,theta,airtime,throughput_mbps\n";
  for (int i = 0; i < graph.size(); ++i) {
    os << graph.node(i).id << ',' << fmt6(a.theta(i)) << ',' << fmt6(a.report.airtime(i)) << ','
       << fmt6(a.report.throughput(i) / 1e6) << '\n';
  }
}

struct SimOptions {
  std::optional<double> warmup, measure;
  int reps = 10;
  std::string dist_backoff = "exponential";
  std::string dist_tx = "exponential";
  bool check_insensitivity = false;
  double tol = 0.02;

  SimConfig config(const ConflictGraph& graph, std::uint64_t seed, int jobs) const {
    SimConfig c = default_sim_config(graph.nodes());
    c.seed = seed;
    if (warmup) c.warmup = *warmup;
    if (measure) c.measure = *measure;
    c.replications = reps;
    c.backoff = parse_distribution_kind(dist_backoff);
    c.tx_time = parse_distribution_kind(dist_tx);
    c.jobs = jobs;
    validate(c);
    return c;
  }
};

void write_sim_meta(std::ostream& os, const SimConfig& c) {
  os << "# seed=" << c.seed << " warmup_s=" << fmt6(c.warmup) << " measure_s=" << fmt6(c.measure)
     << " reps=" << c.replications << " dist_backoff=" << to_string(c.backoff) << " dist_tx=" << to_string(c.tx_time)
     << '\n';
}

int simulate_csv(std::ostream& os, const ConflictGraph& graph, const InputOptions& in, const SimOptions& opt,
                 int jobs) {
  const StateSpace space = enumerate(graph, state_cap_from_env());
  const SimConfig config = opt.config(graph, in.seed, jobs);
  const auto& nodes = graph.nodes();

  if (opt.check_insensitivity) {
    const InsensitivityReport rep = insensitivity_check(graph, config, opt.tol);
    write_header(os, "simulate --check-insensitivity", in);
    write_sim_meta(os, config);
    os << "# tolerance=" << fmt6(opt.tol) << " insensitivity=" << (rep.all_pass() ? "PASS" : "FAIL") << '\n';
    write_nodes_meta(os, nodes);
    os << "backoff,tx,node,airtime,airtime_ci95\n";
    for (const auto& run : rep.runs) {
      for (int i = 0; i < graph.size(); ++i) {
        os << to_string(run.backoff) << ',' << to_string(run.tx_time) << ',' << nodes[i].id << ','
           << fmt6(run.result.airtime(i)) << ',' << fmt6(run.result.airtime_ci95(i)) << '\n';
      }
    }
    os << '\n' << "node,max_discrepancy,ci_overlap,verdict\n";
    for (int i = 0; i < graph.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      os << nodes[k].id << ',' << fmt6(rep.max_discrepancy(i)) << ',' << (rep.ci_overlap[k] ? "yes" : "no") << ','
         << (rep.pass[k] ? "PASS" : "FAIL") << '\n';
    }
    return rep.all_pass() ? kOk : kValidationFailed;
  }

  const SimResult result = simulate(graph, space, config);
  write_header(os, "simulate", in);
  write_sim_meta(os, config);
  write_nodes_meta(os, nodes);
  os << "state,mask,pi_hat,pi_hat_ci95\n";
  for (std::size_t k = 0; k < space.size(); ++k) {
    const auto e = static_cast<Eigen::Index>(k);
    os << state_label(space.state(k), nodes) << ',' << space.state(k) << ',' << fmt6(result.pi_hat(e)) << ','
       << fmt6(result.pi_hat_ci95(e)) << '\n';
  }
  os << '\n' << "node,airtime,airtime_ci95,throughput_mbps,throughput_ci95_mbps\n";
  for (int i = 0; i < graph.size(); ++i) {
    os << nodes[i].id << ',' << fmt6(result.airtime(i)) << ',' << fmt6(result.airtime_ci95(i)) << ','
       << fmt6(result.throughput(i) / 1e6) << ',' << fmt6(result.throughput_ci95(i) / 1e6) << '\n';
  }
  return kOk;
}

struct SweepOptions {
  std::vector<double> grid;
  std::optional<double> eb_min, eb_max;
  int points = 50;

  std::vector<double> resolve(const ConflictGraph& graph) const {
    if (!grid.empty()) {
      if (eb_min || eb_max) throw InputError("--grid cannot be combined with --eb-min/--eb-max");
      return grid;
    }
    const double et = graph.node(0).tx_time_mean;
    const double lo = eb_min.value_or(et / 100.0);
    const double hi = eb_max.value_or(10.0 * et);
    if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw InputError("invalid sweep grid");
    return log_grid(lo, hi, points);
  }
};

void sweep_csv(std::ostream& os, const ConflictGraph& graph, const InputOptions& in, const SweepOptions& opt,
               int jobs) {
  enumerate(graph, state_cap_from_env());
  const std::vector<double> grid = opt.resolve(graph);
  const auto rows = sweep_backoff(graph, grid, jobs);
  write_header(os, "sweep", in);
  os << "# points=" << grid.size() << '\n';
  write_nodes_meta(os, graph.nodes());
  os << "eb_s";
  for (const auto& n : graph.nodes()) os << ",x_" << n.id << "_mbps";
  os << '\n';
  for (const auto& row : rows) {
    os << fmt6(row.backoff_mean);
    for (Eigen::Index i = 0; i < row.report.throughput.size(); ++i) os << ',' << fmt6(row.report.throughput(i) / 1e6);
    os << '\n';
  }
}

struct ValidateOptions {
  double tol = 1e-10;
  double balance_tol = 1e-12;
  bool corrupt_pi = false;
};

bool validate_one(std::ostream& os, const std::string& label, const ConflictGraph& graph,
                  const ValidateOptions& opt) {
  const StateSpace space = enumerate(graph, state_cap_from_env());
  const Eigen::VectorXd theta = compute_theta(graph.nodes());
  StationaryDistribution<double> closed = product_form(space, theta);
  if (opt.corrupt_pi) closed.pi(0) *= 1.01;
  const StationaryDistribution<double> oracle = balance_solve(space, graph.nodes());
  const double oracle_error = (closed.pi - oracle.pi).cwiseAbs().maxCoeff();
  const double residual = check_detailed_balance(space, theta, closed);
  const bool ok = oracle_error < opt.tol && residual < opt.balance_tol;
  os << label << ": states=" << space.size() << " oracle_error=" << fmt_sci(oracle_error)
     << " detailed_balance_residual=" << fmt_sci(residual) << ' ' << (ok ? "PASS" : "FAIL") << '\n';
  return ok;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open output file '" + path + "'");
  file << text;
  if (!file) throw InputError("failed writing output file '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CSMA/CA continuous-time Markov network analyzer and simulator", "ctmn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CTMN_VERSION));

  std::string output;
  int jobs = default_jobs();

  InputOptions analyze_in;
  auto* analyze_cmd = app.add_subcommand("analyze", "product-form stationary distribution and throughput");
  analyze_in.attach(analyze_cmd, true);
  analyze_cmd->add_option("--seed", analyze_in.seed, "seed for --random");
  analyze_cmd->add_option("--output", output, "CSV path (default stdout)");

  InputOptions sim_in;
  SimOptions sim_opt;
  auto* sim_cmd = app.add_subcommand("simulate", "discrete-event simulation of the CSMA/CA network");
  sim_in.attach(sim_cmd, true);
  sim_cmd->add_option("--seed", sim_in.seed, "master seed");
  sim_cmd->add_option("--warmup", sim_opt.warmup, "warmup seconds (default 1e3 * max E[T])");
  sim_cmd->add_option("--measure", sim_opt.measure, "measured seconds (default 1e5 * max E[T])");
  sim_cmd->add_option("--reps", sim_opt.reps, "replications");
  sim_cmd->add_option("--dist-backoff", sim_opt.dist_backoff, "exponential | deterministic | uniform");
  sim_cmd->add_option("--dist-tx", sim_opt.dist_tx, "exponential | deterministic | uniform");
  sim_cmd->add_flag("--check-insensitivity", sim_opt.check_insensitivity, "run every distribution combination");
  sim_cmd->add_option("--tol", sim_opt.tol, "max relative airtime discrepancy for --check-insensitivity");
  sim_cmd->add_option("--jobs", jobs, "parallel replications");
  sim_cmd->add_option("--output", output, "CSV path (default stdout)");

  InputOptions sweep_in;
  SweepOptions sweep_opt;
  auto* sweep_cmd = app.add_subcommand("sweep", "throughput versus a uniform E[B] grid");
  sweep_in.attach(sweep_cmd, false);
  sweep_cmd->add_option("--grid", sweep_opt.grid, "explicit E[B] values (s)")->delimiter(',');
  sweep_cmd->add_option("--eb-min", sweep_opt.eb_min, "grid start (default E[T]/100)");
  sweep_cmd->add_option("--eb-max", sweep_opt.eb_max, "grid end (default 10 E[T])");
  sweep_cmd->add_option("--points", sweep_opt.points, "log-spaced grid points");
  sweep_cmd->add_option("--jobs", jobs, "parallel grid points");
  sweep_cmd->add_option("--output", output, "CSV path (default stdout)");

  InputOptions val_in;
  ValidateOptions val_opt;
  auto* val_cmd = app.add_subcommand("validate", "product form against the generator-matrix solve");
  val_in.attach(val_cmd, true);
  val_cmd->add_option("--seed", val_in.seed, "seed for --random");
  val_cmd->add_option("--tol", val_opt.tol, "max oracle disagreement (inf-norm)");
  val_cmd->add_option("--balance-tol", val_opt.balance_tol, "max detailed-balance residual");
  val_cmd->add_flag("--corrupt-pi", val_opt.corrupt_pi, "test hook: perturb pi_empty by 1%")
      ->group("");
  val_cmd->add_option("--output", output, "report path (default stdout)");

  std::vector<const char*> argv{"ctmn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << CTMN_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    std::ostringstream os;
    int code = kOk;
    if (*analyze_cmd) {
      analyze_csv(os, analyze_in.load(), analyze_in);
    } else if (*sim_cmd) {
      code = simulate_csv(os, sim_in.load(), sim_in, sim_opt, jobs);
    } else if (*sweep_cmd) {
      sweep_csv(os, sweep_in.load(), sweep_in, sweep_opt, jobs);
    } else if (*val_cmd) {
      if (!(val_opt.tol > 0.0) || !(val_opt.balance_tol > 0.0)) throw InputError("tolerances must be > 0");
      bool ok = true;
      if (val_in.scenario == "all") {
        for (ScenarioId id : all_scenarios()) {
          ok = validate_one(os, to_string(id), build(id, val_in.overrides()).graph, val_opt) && ok;
        }
      } else {
        ok = validate_one(os, val_in.describe(), val_in.load(), val_opt);
      }
      os << (ok ? "PASS" : "FAIL") << '\n';
      code = ok ? kOk : kValidationFailed;
    }
    write_output(os.str(), output, out);
    return code;
  } catch (const StateExplosionError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailed;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParameterRangeError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace ctmn::cli
