#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "maturity/report.hpp"
#include "maturity/store.hpp"
#include "support.hpp"

using namespace maturity;
using namespace testing;
namespace fs = std::filesystem;

// Example reports under docs/examples are generated from these fixtures.
// Set MATURITY_UPDATE_GOLDEN=1 to rewrite them.

namespace {

const Questionnaire& Q() { return bundled_questionnaire(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void compare_or_update(const fs::path& dir, const Assessment& a) {
  const ReportBundle b = render_report(a, Q(), compute_report_inputs(a, Q()));
  const std::vector<std::pair<std::string, std::string>> files = {
      {"report.md", b.markdown},
      {"chart-data.json", b.chart_data.dump(2) + "\n"},
      {"document.json", encode_document(make_document(a))}};
  const bool update = std::getenv("MATURITY_UPDATE_GOLDEN") != nullptr;
  for (const auto& [name, content] : files) {
    const fs::path path = dir / name;
    if (update) {
      fs::create_directories(dir);
      std::ofstream(path, std::ios::binary | std::ios::trunc) << content;
    }
    CAPTURE(path.string());
    CHECK(slurp(path) == content);
  }
}

ResponseInput with(ResponseInput in, std::vector<EvidenceItem> evidence, std::string note = {}) {
  in.evidence = std::move(evidence);
  in.note = std::move(note);
  return in;
}

}  // namespace

TEST_CASE("statement-level holistic example") {
  AssessmentSpec spec;
  spec.assessment_id = "example-statement-level";
  spec.organization = {"example-org", "Example Org"};
  spec.scope = ScopeMode::Holistic;
  spec.granularity = GranularityMode::StatementLevel;
  spec.systems = {{"tutor", "Tutoring assistant", LifecycleStage::Deployment, "Generates practice questions"}};
  spec.as_of = at("2024-03-01");
  Assessment a = create_assessment(spec, Q(), at("2024-03-01T09:00:00Z"));
  a = record_responses(
      a,
      {with(scored("1d", "HHH"), {{EvidenceKind::SupportsActivity, "Impact register rates likelihood and magnitude for each harm", {"impact-register.xlsx"}}}),
       with(scored("4d", "HML"), {{EvidenceKind::SupportsActivity, "Validity study across question types", {"validity-report.pdf"}},
                                  {EvidenceKind::IndicatesAbsence, "No external reviewers involved", {}}},
            "High coverage, medium robustness, low input diversity"),
       with(scored("4e", "MML"), {{EvidenceKind::SupportsActivity, "Subgroup error rates reported once", {"fairness.md"}}}),
       with(scored("7b", "LLL"), {{EvidenceKind::NoEvidenceFound, "No fairness mitigation described", {}}}),
       with(not_applicable("4k"), {{EvidenceKind::NotApplicableJustification, "Model is trained in-house; no third-party components", {}}})},
      Q(), at("2024-03-02T10:30:00Z"));
  compare_or_update(fs::path(GOLDEN_DIR) / "statement-level", a);
}

TEST_CASE("per-system topic-level example") {
  AssessmentSpec spec;
  spec.assessment_id = "example-per-system";
  spec.organization = {"example-org", "Example Org"};
  spec.scope = ScopeMode::PerSystem;
  spec.granularity = GranularityMode::TopicLevel;
  spec.systems = {{"chat", "Support chatbot", LifecycleStage::Deployment, ""},
                  {"ranker", "Search ranker", LifecycleStage::BuildingAndData, ""}};
  spec.as_of = at("2024-06-01");
  Assessment a = create_assessment(spec, Q(), at("2024-06-01T09:00:00Z"));
  a = record_responses(
      a,
      {with(scored("3", "HHM", "chat"), {{EvidenceKind::SupportsActivity, "Governance committee meets monthly", {"minutes"}}}),
       with(scored("4", "LLL", "chat"), {{EvidenceKind::IndicatesAbsence, "Only accuracy is measured", {}}}),
       with(scored("9", "MMM", "chat"), {{EvidenceKind::SupportsActivity, "Incident dashboard", {"dashboard"}}}),
       with(scored("3", "HHH", "ranker"), {{EvidenceKind::SupportsActivity, "Same committee covers the ranker", {"minutes"}}}),
       with(not_applicable("5", "ranker"), {{EvidenceKind::NotApplicableJustification, "Internal tool with no end users yet", {}}})},
      Q(), at("2024-06-02T10:30:00Z"));
  compare_or_update(fs::path(GOLDEN_DIR) / "per-system", a);
}
