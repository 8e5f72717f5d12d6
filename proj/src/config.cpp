#include "maturity/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "maturity/error.hpp"

namespace maturity {

std::optional<std::string> process_env(const char* name) {
  if (const char* v = std::getenv(name); v && *v) return std::string(v);
  return std::nullopt;
}

void apply_listen(Config& config, const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ValidationError, "listen address must be host:port");
  int port = 0;
  const char* first = listen.data() + colon + 1;
  const char* last = listen.data() + listen.size();
  auto [ptr, ec] = std::from_chars(first, last, port);
  if (ec != std::errc{} || ptr != last || port < 0 || port > 65535) {
    throw Error(ErrorCode::ValidationError, fmt::format("bad port in listen address '{}'", listen));
  }
  if (colon > 0) config.host = listen.substr(0, colon);
  config.port = port;
}

namespace {

double parse_threshold(const std::string& text, const char* name) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw Error(ErrorCode::ValidationError, fmt::format("{} must be a number, got '{}'", name, text));
  }
  return v;
}

void check(const Config& c) {
  const auto& d = c.diagnostics;
  if (d.low < 1.0 || d.high > 5.0 || d.low >= d.high) {
    throw Error(ErrorCode::ValidationError, "diagnostic thresholds need 1 <= low < high <= 5");
  }
  if (c.coverage.medium <= 0.0 || c.coverage.high > 1.0 || c.coverage.medium >= c.coverage.high) {
    throw Error(ErrorCode::ValidationError, "coverage thresholds need 0 < medium < high <= 1");
  }
}

}  // namespace

Config load_config(const std::optional<std::string>& path, const EnvLookup& env) {
  Config c;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::NotFound, fmt::format("cannot open config file {}", *path));
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, fmt::format("config file {}: {}", *path, e.what()));
    }
    try {
      if (j.contains("listen")) apply_listen(c, j["listen"].get<std::string>());
      if (j.contains("store")) c.store_path = j["store"].get<std::string>();
      if (j.contains("questionnaire")) c.questionnaire_path = j["questionnaire"].get<std::string>();
      if (j.contains("token")) c.bearer_token = j["token"].get<std::string>();
      if (j.contains("ui_dir")) c.ui_dir = j["ui_dir"].get<std::string>();
      if (j.contains("thresholds")) {
        c.diagnostics.high = j["thresholds"].value("high", c.diagnostics.high);
        c.diagnostics.low = j["thresholds"].value("low", c.diagnostics.low);
      }
      if (j.contains("coverage_thresholds")) {
        c.coverage.medium = j["coverage_thresholds"].value("medium", c.coverage.medium);
        c.coverage.high = j["coverage_thresholds"].value("high", c.coverage.high);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, fmt::format("config file {}: {}", *path, e.what()));
    }
  }
  if (auto v = env("MATURITY_LISTEN")) apply_listen(c, *v);
  if (auto v = env("MATURITY_STORE")) c.store_path = *v;
  if (auto v = env("MATURITY_QUESTIONNAIRE")) c.questionnaire_path = *v;
  if (auto v = env("MATURITY_TOKEN")) c.bearer_token = *v;
  if (auto v = env("MATURITY_UI_DIR")) c.ui_dir = *v;
  if (auto v = env("MATURITY_HIGH_THRESHOLD")) c.diagnostics.high = parse_threshold(*v, "MATURITY_HIGH_THRESHOLD");
  if (auto v = env("MATURITY_LOW_THRESHOLD")) c.diagnostics.low = parse_threshold(*v, "MATURITY_LOW_THRESHOLD");
  check(c);
  return c;
}

}  // namespace maturity
