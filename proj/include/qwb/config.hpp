#pragma once

// Flat key = value configuration with [experiment] and [params] sections.
//
//   # comment
//   [experiment]
//   name = larmor
//   seed = 42
//   out  = results/larmor
//   [params]
//   omega0 = 2.0

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace qwb {

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 42;
  std::optional<std::filesystem::path> out_dir;
  std::map<std::string, double> params;
};

/// Throws ConfigError naming the offending line or key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace qwb
