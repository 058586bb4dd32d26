#pragma once

// Test-only reference computations. These deliberately avoid the library's
// enumeration and log-domain paths.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ctmn/topology.hpp"

namespace oracle {

/// Every subset of {0..n-1} with no conflicting pair, by powerset filtering.
inline std::vector<ctmn::Mask> independent_sets(const ctmn::ConflictGraph& g) {
  std::vector<ctmn::Mask> out;
  const int n = g.size();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        if ((s >> i & 1) && (s >> j & 1) && g.conflicts(i, j)) ok = false;
      }
    }
    if (ok) out.push_back(static_cast<ctmn::Mask>(s));
  }
  return out;
}

/// Product-form pi keyed by mask, with plain products and a plain sum.
inline std::map<ctmn::Mask, double> product_form(const ctmn::ConflictGraph& g, const std::vector<double>& theta) {
  std::map<ctmn::Mask, double> w;
  double phi = 0.0;
  for (ctmn::Mask s : independent_sets(g)) {
    double p = 1.0;
    for (int i = 0; i < g.size(); ++i) {
      if (s >> i & 1) p *= theta[static_cast<std::size_t>(i)];
    }
    w[s] = p;
    phi += p;
  }
  for (auto& [s, p] : w) p /= phi;
  return w;
}

/// Set of labels such as {"-", "A", "BD"} from masks and single-character ids.
inline std::set<std::string> labels(const std::vector<ctmn::Mask>& masks, const std::vector<ctmn::Node>& nodes) {
  std::set<std::string> out;
  for (ctmn::Mask m : masks) {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (m >> i & 1) s += nodes[i].id;
    }
    out.insert(s.empty() ? "-" : s);
  }
  return out;
}

inline ctmn::Node node(std::string id, double eb = 1e-3, double et = 1e-3, double el = 12000.0) {
  ctmn::Node n;
  n.id = std::move(id);
  n.backoff_mean = eb;
  n.tx_time_mean = et;
  n.packet_len_mean = el;
  return n;
}

/// Random graph with random theta in [lo, hi] (log-uniform).
inline ctmn::ConflictGraph random_graph(std::mt19937_64& rng, int n, double edge_p, double lo = 0.01,
                                        double hi = 100.0) {
  std::uniform_real_distribution<double> lt(std::log(lo), std::log(hi));
  std::bernoulli_distribution edge(edge_p);
  std::vector<ctmn::Node> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back(node("n" + std::to_string(i), 1e-3 / std::exp(lt(rng)), 1e-3));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (edge(rng)) edges.emplace_back(i, j);
    }
  }
  return ctmn::ConflictGraph(std::move(nodes), edges);
}

}  // namespace oracle
