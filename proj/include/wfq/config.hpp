// =============================================================================
// config.hpp — Run configuration files.
//
// Reads the flat TOML subset the run schema needs: `key = value` pairs with
// integers, floats, booleans, quoted strings, and one-level arrays of
// numbers.  Comments start with '#'.  Keys mirror SimulationConfig:
//   ell, kappa, q, m, fitness, seed, horizon, burn_in, replicas, start
// where `start` is "master", "neutral", "fixed-point <b>", or an array of
// ell+1 occupancy counts.
// =============================================================================
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "wfq/simulate.hpp"

namespace wfq {

using TomlValue = std::variant<long long, double, bool, std::string, std::vector<double>>;
using TomlTable = std::map<std::string, TomlValue>;

TomlTable parse_flat_toml(const std::string& text);
TomlTable parse_flat_toml_file(const std::filesystem::path& path);

SimulationConfig sim_config_from_table(const TomlTable& table);

// Resolves a start preset string against an otherwise complete config.
Occupancy resolve_start_preset(const SimulationConfig& config, const std::string& preset);

}  // namespace wfq
