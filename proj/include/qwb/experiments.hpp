#pragma once

// Registry of named experiments. Each one produces CSV tables and a list of
// pass/fail assertions tagged with the acceptance criterion they support.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qwb/config.hpp"
#include "qwb/csv.hpp"

namespace qwb {

using ParamMap = std::map<std::string, double>;

struct ParamSpec {
  std::string key;
  double default_value = 0.0;
  enum Kind { Real, Positive, NonNegative, Integer } kind = Positive;
};

struct Assertion {
  std::string criterion;  // "AC1" ... "AC16"
  std::string name;
  std::string relation;   // "<=", "<", ">", ">="
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct Artifact {
  std::string file;  // relative file name, e.g. "trace.csv"
  CsvTable table;
};

struct ExperimentResult {
  std::vector<Artifact> artifacts;
  std::vector<Assertion> assertions;

  bool passed() const;
  void at_most(const std::string& criterion, const std::string& name, double value, double threshold);
  void less(const std::string& criterion, const std::string& name, double value, double threshold);
  void greater(const std::string& criterion, const std::string& name, double value, double threshold);
  void at_least(const std::string& criterion, const std::string& name, double value, double threshold);
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string validates;  // the physical statement under test
  std::vector<ParamSpec> params;
  std::function<ExperimentResult(const ParamMap&, std::uint64_t seed)> body;
};

const std::vector<ExperimentInfo>& experiment_registry();
/// Throws ConfigError for an unknown name.
const ExperimentInfo& find_experiment(std::string_view name);

/// Fills defaults and validates. Throws ConfigError naming an unknown or invalid key.
ParamMap resolve_params(const ExperimentInfo& info, const std::map<std::string, double>& given);

/// Runs in memory with resolved parameters.
ExperimentResult run_experiment(std::string_view name, const std::map<std::string, double>& given, std::uint64_t seed);

struct ArtifactRecord {
  std::string file;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string experiment;
  std::uint64_t seed = 0;
  ParamMap params;
  std::vector<ArtifactRecord> artifacts;
  double wall_time_s = 0.0;
  std::vector<Assertion> assertions;
  bool passed = false;

  std::string to_json() const;
};

/// Runs the configured experiment, writes CSVs and manifest.json into the
/// output directory, then throws ExperimentFailed naming the first failing
/// assertion if any failed.
RunManifest run(const ExperimentConfig& cfg, const std::filesystem::path& default_out = "qwb-out");

/// Rows whose name or description contains `filter` (case-insensitive).
std::vector<const ExperimentInfo*> filter_experiments(std::string_view filter);
std::string list_experiments(std::string_view filter = {});

std::string sha256_hex(std::string_view bytes);

}  // namespace qwb
