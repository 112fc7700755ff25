#include "qwb/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qwb/core.hpp"

namespace qwb {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view v, std::size_t line, const std::string& key) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) fail(line, "key '" + key + "' expects a number, got '" + std::string(v) + "'");
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  enum class Section { None, Experiment, Params } section = Section::None;
  bool have_name = false, have_seed = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name == "experiment") {
        section = Section::Experiment;
      } else if (name == "params") {
        section = Section::Params;
      } else {
        fail(line_no, "unknown section '" + std::string(name) + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "key '" + key + "' has no value");

    switch (section) {
      case Section::None:
        fail(line_no, "key '" + key + "' appears before any section");
      case Section::Experiment:
        if (key == "name") {
          if (have_name) fail(line_no, "duplicate key 'name'");
          cfg.name = std::string(value);
          have_name = true;
        } else if (key == "seed") {
          if (have_seed) fail(line_no, "duplicate key 'seed'");
          std::uint64_t s = 0;
          const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
          if (ec != std::errc{} || p != value.data() + value.size()) fail(line_no, "key 'seed' expects an unsigned integer");
          cfg.seed = s;
          have_seed = true;
        } else if (key == "out") {
          if (cfg.out_dir) fail(line_no, "duplicate key 'out'");
          cfg.out_dir = std::filesystem::path(std::string(value));
        } else {
          fail(line_no, "unknown key '" + key + "' in [experiment]");
        }
        break;
      case Section::Params:
        if (cfg.params.count(key)) fail(line_no, "duplicate key '" + key + "'");
        cfg.params[key] = parse_number(value, line_no, key);
        break;
    }
  }
  if (!have_name) throw Error(ErrorCode::ConfigError, "missing key 'name' in [experiment]");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qwb
