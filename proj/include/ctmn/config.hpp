#pragma once

#include <cstdint>
#include <string>

#include "ctmn/scenarios.hpp"

namespace ctmn {

/// Parses a network description:
///
///   { "mode": "pairs" | "geometry" | "channels",
///     "nodes": [ { "id", "eb_s", "et_s", "el_bits", "channels"?, "x"?, "y"?, "cs_range"? } ],
///     "conflicts": [ ["A", "B"], ... ] }            // pairs mode only
///
/// `channels` is accepted in every mode and sets the bonding width; x, y and
/// cs_range are required in geometry mode and rejected elsewhere. Overrides are
/// applied before the graph is built. Errors are InputError with the JSON
/// line/column or the offending field path in the message.
ConflictGraph parse_network_config(const std::string& text, const ScenarioOverrides& overrides = {});

ConflictGraph load_network_config(const std::string& path, const ScenarioOverrides& overrides = {});

/// Random network for oracle checks: theta log-uniform in [theta_lo, theta_hi]
/// (E[T] = 1 ms, E[L] = 12000 bits) and each pair conflicting with `edge_probability`.
ConflictGraph random_network(int node_count, double edge_probability, std::uint64_t seed,
                             double theta_lo = 0.01, double theta_hi = 100.0);

}  // namespace ctmn
