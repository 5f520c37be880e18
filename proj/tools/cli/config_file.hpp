#pragma once
// Flat `key = value` configuration files. One key per line, `#` starts a
// comment, SI units:
//
//   r0 = 2000            # Ohm
//   r1 = 9000            # Ohm
//   t_eff = 1.81e16      # K
//   bandwidth = 1000     # Hz
//   gamma = 100          # bandwidth / f_B
//   beta = 0.5
//   delta = 0.5
//   d_coeff = 1          # 1/V
//   oversampling = 4
//   boltzmann_k = 1.380649e-23  # J/K

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "json.hpp"
#include "kljn/core.hpp"

namespace kljn::cli {

/// Applies `key = value` lines on top of `base`. Unknown keys and malformed
/// lines throw ConfigError with the line number.
SystemConfig parse_config(std::istream& in, SystemConfig base = {});
SystemConfig load_config(const std::filesystem::path& path, SystemConfig base = {});

/// Sets one key; throws ConfigError for an unknown key.
void set_config_value(SystemConfig& config, const std::string& key, double value);

/// Round-trippable text form (17 significant digits).
std::string format_config(const SystemConfig& config);

nlohmann::ordered_json config_to_json(const SystemConfig& config);

}  // namespace kljn::cli
