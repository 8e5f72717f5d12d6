#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "maturity/assessment.hpp"
#include "maturity/questionnaire.hpp"
#include "maturity/scoring.hpp"
#include "maturity/time.hpp"

namespace testing {

using namespace maturity;

inline Timestamp at(const char* text) { return *parse_timestamp(text); }

inline MetricAssessment metrics(MetricRating c, MetricRating r, MetricRating d) { return {c, r, d, std::nullopt}; }

inline MetricAssessment metrics(std::string_view letters) {
  return {*parse_rating(letters.substr(0, 1)), *parse_rating(letters.substr(1, 1)), *parse_rating(letters.substr(2, 1)),
          std::nullopt};
}

inline EvidenceItem supports(std::string description = "documented process") {
  return {EvidenceKind::SupportsActivity, std::move(description), {"policy.pdf"}};
}

inline EvidenceItem justification(std::string description = "system has no third-party components") {
  return {EvidenceKind::NotApplicableJustification, std::move(description), {}};
}

inline ResponseInput scored(std::string target, std::string_view letters, std::optional<std::string> system = {}) {
  ResponseInput in;
  in.target = std::move(target);
  in.system_id = std::move(system);
  in.metrics = metrics(letters);
  in.evidence = {supports()};
  return in;
}

inline ResponseInput not_applicable(std::string target, std::optional<std::string> system = {}) {
  ResponseInput in;
  in.target = std::move(target);
  in.system_id = std::move(system);
  in.evidence = {justification()};
  return in;
}

inline AssessmentSpec holistic_spec(GranularityMode g, LifecycleStage stage = LifecycleStage::Deployment,
                                    std::string org = "acme") {
  AssessmentSpec spec;
  spec.assessment_id = "a-" + org;
  spec.organization = {org, org};
  spec.scope = ScopeMode::Holistic;
  spec.granularity = g;
  spec.systems = {{"sys", "System", stage, ""}};
  return spec;
}

inline Assessment fresh(GranularityMode g, LifecycleStage stage = LifecycleStage::Deployment) {
  return create_assessment(holistic_spec(g, stage), bundled_questionnaire(), at("2024-01-01"));
}

// A directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("maturity-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
