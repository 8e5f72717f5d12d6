#pragma once

#include <functional>
#include <optional>
#include <string>

#include "maturity/aggregation.hpp"
#include "maturity/scoring.hpp"

namespace maturity {

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store_path = "maturity-store";
  std::optional<std::string> questionnaire_path;  // bundled data when absent
  DiagnosticThresholds diagnostics;
  CoverageThresholds coverage;
  std::optional<std::string> bearer_token;  // no auth when absent
  std::optional<std::string> ui_dir;        // static bundle served at /
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

std::optional<std::string> process_env(const char* name);

// Defaults, then the JSON config file (if given), then environment:
// MATURITY_LISTEN (host:port), MATURITY_STORE, MATURITY_QUESTIONNAIRE,
// MATURITY_HIGH_THRESHOLD, MATURITY_LOW_THRESHOLD, MATURITY_TOKEN,
// MATURITY_UI_DIR. Throws Error{ParseError | ValidationError}.
Config load_config(const std::optional<std::string>& path, const EnvLookup& env = process_env);

// "host:port" or ":port".
void apply_listen(Config& config, const std::string& listen);

}  // namespace maturity
