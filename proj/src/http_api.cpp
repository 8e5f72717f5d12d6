#include "maturity/http_api.hpp"

#include <charconv>
#include <iostream>

#include <fmt/format.h>
#include <httplib.h>

#include "maturity/codec.hpp"
#include "maturity/config.hpp"
#include "maturity/error.hpp"
#include "maturity/service.hpp"

namespace maturity {

using codec::json;

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kId = "([A-Za-z0-9._-]+)";

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message,
                const std::vector<std::string>& ids = {}) {
  send_json(res, {{"error", {{"code", code}, {"message", message}, {"ids", ids}}}}, status);
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, http_status(e.code()), e.machine_code(), e.what(), e.offending_ids());
  } catch (const json::exception& e) {
    send_error(res, 400, to_machine_code(ErrorCode::ParseError), e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "INTERNAL_ERROR", e.what());
  }
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

std::optional<std::string_view> as_view(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return std::string_view(*s);
}

std::int64_t parse_int(const std::string& text, const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ValidationError, fmt::format("{} must be an integer", what));
  }
  return v;
}

// Body field first, then an If-Match header holding the ETag.
std::int64_t expected_revision(const httplib::Request& req, const json& body) {
  if (body.contains("expected_revision")) {
    const json& v = body["expected_revision"];
    if (!v.is_number_integer()) throw Error(ErrorCode::ValidationError, "expected_revision must be an integer");
    return v.get<std::int64_t>();
  }
  if (req.has_header("If-Match")) {
    std::string tag = req.get_header_value("If-Match");
    if (tag.size() >= 2 && tag.front() == '"' && tag.back() == '"') tag = tag.substr(1, tag.size() - 2);
    return parse_int(tag, "If-Match");
  }
  throw Error(ErrorCode::ValidationError, "expected_revision is required for mutations");
}

void send_assessment(httplib::Response& res, const Assessment& a, int status = 200) {
  res.set_header("ETag", fmt::format("\"{}\"", a.revision));
  send_json(res, codec::to_json(a), status);
}

AssessmentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "request body must be an object");
  AssessmentSpec spec;
  spec.assessment_id = j.value("assessment_id", std::string{});
  const json& org = j.at("organization");
  spec.organization.id = org.at("id").get<std::string>();
  spec.organization.name = org.value("name", spec.organization.id);
  auto scope = parse_scope(j.at("scope").get<std::string>());
  if (!scope) throw Error(ErrorCode::ValidationError, "scope must be PerSystem or Holistic");
  spec.scope = *scope;
  auto granularity = parse_granularity(j.at("granularity").get<std::string>());
  if (!granularity) throw Error(ErrorCode::ValidationError, "granularity must be TopicLevel or StatementLevel");
  spec.granularity = *granularity;
  for (const auto& sj : j.at("systems")) {
    AISystemProfile s;
    s.system_id = sj.at("system_id").get<std::string>();
    s.name = sj.value("name", s.system_id);
    auto stage = parse_stage(sj.at("stage").get<std::string>());
    if (!stage) throw Error(ErrorCode::ValidationError, fmt::format("system '{}' has an unknown stage", s.system_id));
    s.stage = *stage;
    s.description = sj.value("description", std::string{});
    spec.systems.push_back(std::move(s));
  }
  if (j.contains("as_of") && !j["as_of"].is_null()) {
    auto t = parse_timestamp(j["as_of"].get<std::string>());
    if (!t) throw Error(ErrorCode::ValidationError, "as_of must be YYYY-MM-DD or YYYY-MM-DDTHH:MM:SSZ");
    spec.as_of = t;
  }
  return spec;
}

}  // namespace

void mount_api(httplib::Server& server, AssessmentService& service, const ApiOptions& options) {
  if (options.bearer_token) {
    const std::string expected = "Bearer " + *options.bearer_token;
    server.set_pre_routing_handler([expected](const httplib::Request& req, httplib::Response& res) {
      if (req.path.rfind("/api/", 0) == 0 && req.get_header_value("Authorization") != expected) {
        send_error(res, 401, to_machine_code(ErrorCode::Unauthorized), "missing or wrong bearer token");
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
  }
  if (options.ui_dir) server.set_mount_point("/", *options.ui_dir);

  server.Get("/api/v1/questionnaire", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::optional<LifecycleStage> stage;
      if (auto s = param(req, "stage")) {
        stage = parse_stage(*s);
        if (!stage) throw Error(ErrorCode::ValidationError, "stage must be plan, build or deploy");
      }
      GranularityMode granularity = GranularityMode::StatementLevel;
      if (auto g = param(req, "granularity")) {
        auto parsed = parse_granularity(*g);
        if (!parsed) throw Error(ErrorCode::ValidationError, "granularity must be topic or statement");
        granularity = *parsed;
      }
      send_json(res, questionnaire_view(service.questionnaire(), stage, granularity));
    });
  });

  server.Get("/api/v1/coverage-suggestion", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto covered = parse_int(param(req, "covered").value_or(""), "covered");
      const auto applicable = parse_int(param(req, "applicable").value_or(""), "applicable");
      const MetricRating r = suggest_coverage_rating(static_cast<int>(covered), static_cast<int>(applicable),
                                                     service.options().coverage);
      send_json(res, {{"suggestion", to_string(r)}, {"binding", false}});
    });
  });

  server.Get("/api/v1/assessments", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto org = param(req, "org");
      json list = json::array();
      for (const auto& s : service.store().list(as_view(org))) {
        list.push_back({{"assessment_id", s.assessment_id},
                        {"organization", {{"id", s.organization.id}, {"name", s.organization.name}}},
                        {"revision", s.revision},
                        {"scope", to_string(s.scope)},
                        {"granularity", to_string(s.granularity)},
                        {"response_count", s.response_count},
                        {"created_at", format_timestamp(s.created_at)},
                        {"updated_at", format_timestamp(s.updated_at)}});
      }
      send_json(res, {{"assessments", std::move(list)}});
    });
  });

  server.Post("/api/v1/assessments", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_assessment(res, service.create(spec_from_json(codec::parse(req.body))), 201); });
  });

  server.Get(fmt::format("/api/v1/assessments/{}", kId), [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::optional<std::int64_t> revision;
      if (auto r = param(req, "revision")) revision = parse_int(*r, "revision");
      send_assessment(res, service.document(req.matches[1].str(), revision).assessment);
    });
  });

  server.Get(fmt::format("/api/v1/assessments/{}/targets", kId),
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const auto system = param(req, "system");
                 const auto targets = service.targets(req.matches[1].str(), as_view(system));
                 send_json(res, {{"targets", targets}, {"count", targets.size()}});
               });
             });

  server.Get(fmt::format("/api/v1/assessments/{}/completeness", kId),
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] { send_json(res, codec::to_json(service.completeness(req.matches[1].str()))); });
             });

  server.Put(fmt::format("/api/v1/assessments/{}/responses/([0-9a-z]+)", kId),
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 json body = codec::parse(req.body);
                 if (!body.is_object()) throw Error(ErrorCode::ParseError, "request body must be an object");
                 const std::int64_t expected = expected_revision(req, body);
                 body["target"] = req.matches[2].str();
                 if (auto system = param(req, "system")) body["system_id"] = *system;
                 const ResponseInput input = codec::response_input_from_json(body);
                 const Assessment a = service.respond(req.matches[1].str(), expected, input);
                 const Response& stored = a.responses.at({input.target, input.system_id.value_or("")});
                 res.set_header("ETag", fmt::format("\"{}\"", a.revision));
                 send_json(res, {{"assessment_id", a.assessment_id},
                                 {"revision", a.revision},
                                 {"score", stored.score.is_numeric() ? json(stored.score.value()) : json("N/A")},
                                 {"response", codec::to_json(stored)}});
               });
             });

  server.Post(fmt::format("/api/v1/assessments/{}/import", kId),
              [&service](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  const json body = codec::parse(req.body);
                  if (!body.is_object()) throw Error(ErrorCode::ParseError, "request body must be an object");
                  const auto inputs = codec::response_inputs_from_json(body);
                  send_assessment(res, service.import_responses(req.matches[1].str(), expected_revision(req, body), inputs));
                });
              });

  server.Get(fmt::format("/api/v1/assessments/{}/aggregates", kId),
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 auto mode = parse_aggregation_mode(param(req, "mode").value_or("pillar"));
                 if (!mode) throw Error(ErrorCode::ValidationError, "mode must be pillar or dimension");
                 const auto system = param(req, "system");
                 send_json(res, service.aggregates(req.matches[1].str(), *mode, as_view(system)));
               });
             });

  server.Get(fmt::format("/api/v1/assessments/{}/diagnostics", kId),
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const auto system = param(req, "system");
                 send_json(res, {{"diagnostics", codec::to_json(service.diagnostics(req.matches[1].str(), as_view(system)))}});
               });
             });

  server.Get(fmt::format("/api/v1/assessments/{}/report", kId),
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const ReportBundle bundle = service.report(req.matches[1].str());
                 send_json(res, {{"markdown", bundle.markdown}, {"chart_data", bundle.chart_data}});
               });
             });

  server.Get(fmt::format("/api/v1/organizations/{}/trajectory", kId),
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 send_json(res, {{"organization_id", req.matches[1].str()},
                                 {"points", codec::to_json(service.trajectory(req.matches[1].str()))}});
               });
             });
}

int serve(const Config& config) {
  const Questionnaire q = config.questionnaire_path ? load_questionnaire_file(*config.questionnaire_path)
                                                    : bundled_questionnaire();
  FileStore store(config.store_path);
  ServiceOptions options;
  options.diagnostics = config.diagnostics;
  options.coverage = config.coverage;
  AssessmentService service(q, store, options);

  httplib::Server server;
  mount_api(server, service, {config.bearer_token, config.ui_dir});
  std::cerr << fmt::format("maturity: listening on http://{}:{} (store {})\n", config.host, config.port,
                           config.store_path);
  if (!server.listen(config.host, config.port)) {
    throw Error(ErrorCode::StorageError, fmt::format("cannot listen on {}:{}", config.host, config.port));
  }
  return 0;
}

}  // namespace maturity
