#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qwb/config.hpp"
#include "qwb/core.hpp"

using namespace qwb;

namespace {

std::string config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  FAIL("expected ConfigError for: " << text);
  return {};
}

}  // namespace

TEST_CASE("parse a full config") {
  const auto c = parse_config(
      "# larmor run\n"
      "[experiment]\n"
      "name = larmor   ; trailing comment\n"
      "seed = 7\n"
      "out = results/larmor\n"
      "\n"
      "[params]\n"
      "omega0 = 2.5\n"
      "gamma=-1e-3\r\n");
  CHECK(c.name == "larmor");
  CHECK(c.seed == 7);
  REQUIRE(c.out_dir.has_value());
  CHECK(c.out_dir->string() == "results/larmor");
  CHECK(c.params.at("omega0") == 2.5);
  CHECK(c.params.at("gamma") == -1e-3);
}

TEST_CASE("defaults") {
  const auto c = parse_config("[experiment]\nname = epr\n");
  CHECK(c.seed == 42);
  CHECK_FALSE(c.out_dir.has_value());
  CHECK(c.params.empty());
}

TEST_CASE("errors name the offending key or line") {
  CHECK(config_error("[experiment]\nname = x\n[params]\nomega0 = fast\n").find("omega0") != std::string::npos);
  CHECK(config_error("[experiment]\nname = x\ncolour = red\n").find("colour") != std::string::npos);
  CHECK(config_error("omega0 = 1\n").find("omega0") != std::string::npos);
  CHECK(config_error("[experiment]\nname = x\n[params]\na = 1\na = 2\n").find("'a'") != std::string::npos);
  CHECK(config_error("[experiment]\nname = x\n[extra]\n").find("line 3") != std::string::npos);
  CHECK(config_error("[experiment]\nname = x\nseed = -3\n").find("seed") != std::string::npos);
  CHECK(config_error("[experiment]\nname =\n").find("name") != std::string::npos);
  CHECK(config_error("[experiment\nname = x\n").find("line 1") != std::string::npos);
  CHECK(config_error("[experiment]\njust words\n").find("line 2") != std::string::npos);
  config_error("[params]\na = 1\n");
  config_error("[experiment]\nname = a\nname = b\n");
}

TEST_CASE("load_config") {
  const auto path = std::filesystem::temp_directory_path() / "qwb_test_config.cfg";
  {
    std::ofstream out(path);
    out << "[experiment]\nname = two-spin\n[params]\nhbar = 2\n";
  }
  const auto c = load_config(path);
  CHECK(c.name == "two-spin");
  CHECK(c.params.at("hbar") == 2.0);
  std::filesystem::remove(path);
  try {
    load_config(path);
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}
