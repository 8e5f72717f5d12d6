#pragma once

#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace maturity {

class AssessmentService;
struct Config;

struct ApiOptions {
  std::optional<std::string> bearer_token;
  std::optional<std::string> ui_dir;
};

// Routes (all JSON):
//   GET  /api/v1/questionnaire[?stage=plan|build|deploy&granularity=topic|statement]
//   GET  /api/v1/coverage-suggestion?covered=N&applicable=M
//   GET  /api/v1/assessments[?org=ID]
//   POST /api/v1/assessments
//   GET  /api/v1/assessments/{id}[?revision=N]
//   GET  /api/v1/assessments/{id}/targets[?system=ID]
//   GET  /api/v1/assessments/{id}/completeness
//   PUT  /api/v1/assessments/{id}/responses/{target}[?system=ID]
//   POST /api/v1/assessments/{id}/import
//   GET  /api/v1/assessments/{id}/aggregates?mode=pillar|dimension[&system=ID]
//   GET  /api/v1/assessments/{id}/diagnostics[?system=ID]
//   GET  /api/v1/assessments/{id}/report
//   GET  /api/v1/organizations/{org}/trajectory
// Errors: {"error": {"code", "message", "ids"}} with a 4xx/5xx status.
// Mutating and assessment responses carry the revision in the body and in an
// ETag header.
void mount_api(httplib::Server& server, AssessmentService& service, const ApiOptions& options = {});

// Blocks until the server stops.
int serve(const Config& config);

}  // namespace maturity
