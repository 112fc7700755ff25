// qwb: run named experiments from config files, or list them.
//
//   qwb run configs/larmor.cfg [--seed N] [--out DIR]
//   qwb list [filter]
//
// Exit status: 0 all assertions passed, 1 an assertion failed, 2 any other error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qwb/config.hpp"
#include "qwb/core.hpp"
#include "qwb/csv.hpp"
#include "qwb/experiments.hpp"

namespace {

void report(const qwb::RunManifest& m, const std::filesystem::path& dir) {
  for (const auto& a : m.assertions) {
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.criterion << "  " << a.name << ": " << qwb::format_double(a.value)
              << ' ' << a.relation << ' ' << qwb::format_double(a.threshold) << '\n';
  }
  std::cout << m.experiment << ": " << m.artifacts.size() << " artifact(s) in " << dir.string() << ", "
            << qwb::format_double(m.wall_time_s) << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical quantum mechanics workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", config_path, "Config file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the config seed");
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Override the output directory");

  std::string filter;
  auto* list_cmd = app.add_subcommand("list", "List registered experiments");
  list_cmd->add_option("filter", filter, "Case-insensitive substring of name or description");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*list_cmd) {
    std::cout << qwb::list_experiments(filter);
    return 0;
  }

  try {
    auto cfg = qwb::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (*out_opt) cfg.out_dir = out_dir;
    const std::filesystem::path dir = cfg.out_dir.value_or("qwb-out");
    try {
      const auto manifest = qwb::run(cfg);
      report(manifest, dir);
      return 0;
    } catch (const qwb::Error& e) {
      if (e.code() != qwb::ErrorCode::ExperimentFailed) throw;
      std::cerr << "qwb: " << e.what() << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "qwb: " << e.what() << "\n";
    return 2;
  }
}
