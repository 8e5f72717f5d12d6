#include <doctest.h>

#include <fstream>
#include <map>

#include "maturity/config.hpp"
#include "maturity/error.hpp"
#include "support.hpp"

using namespace maturity;

namespace {

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars](const char* name) -> std::optional<std::string> {
    auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace

TEST_CASE("defaults") {
  const Config c = load_config(std::nullopt, env_of({}));
  CHECK(c.host == "127.0.0.1");
  CHECK(c.port == 8080);
  CHECK(c.diagnostics == DiagnosticThresholds{4.0, 2.0});
  CHECK_FALSE(c.bearer_token);
}

TEST_CASE("file then environment") {
  testing::TempDir dir;
  const auto path = (dir.path() / "config.json").string();
  std::ofstream(path) << R"({"listen": "0.0.0.0:9000", "store": "/data", "token": "s3cret",
                            "thresholds": {"high": 3.5}})";
  Config c = load_config(path, env_of({}));
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 9000);
  CHECK(c.store_path == "/data");
  CHECK(c.bearer_token == "s3cret");
  CHECK(c.diagnostics.high == 3.5);
  CHECK(c.diagnostics.low == 2.0);

  c = load_config(path, env_of({{"MATURITY_LISTEN", ":7000"}, {"MATURITY_LOW_THRESHOLD", "1.5"}}));
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 7000);
  CHECK(c.diagnostics.low == 1.5);
}

TEST_CASE("bad configuration is rejected") {
  CHECK_THROWS_AS(load_config(std::nullopt, env_of({{"MATURITY_HIGH_THRESHOLD", "high"}})), Error);
  CHECK_THROWS_AS(load_config(std::nullopt, env_of({{"MATURITY_LOW_THRESHOLD", "4.5"}})), Error);
  CHECK_THROWS_AS(load_config(std::nullopt, env_of({{"MATURITY_LISTEN", "host:port"}})), Error);
  CHECK_THROWS_AS(load_config(std::string("/nonexistent/config.json"), env_of({})), Error);
}
