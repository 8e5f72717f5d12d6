#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "maturity/aggregation.hpp"
#include "maturity/assessment.hpp"
#include "maturity/questionnaire.hpp"
#include "maturity/report.hpp"
#include "maturity/store.hpp"

namespace maturity {

enum class AggregationMode { Pillar, Dimension };

std::optional<AggregationMode> parse_aggregation_mode(std::string_view text) noexcept;

struct ServiceOptions {
  DiagnosticThresholds diagnostics;
  CoverageThresholds coverage;
  Clock clock = system_now;
  // Produces an id for assessments created without one.
  std::function<std::string(const AssessmentSpec&, Timestamp)> make_id;
};

// The operations both the CLI and the HTTP API expose. Every mutation is
// load -> validate -> save(expected revision), so the store's revision check
// is the single serialization point.
class AssessmentService {
 public:
  AssessmentService(const Questionnaire& q, FileStore& store, ServiceOptions options = {});

  const Questionnaire& questionnaire() const noexcept { return q_; }
  const ServiceOptions& options() const noexcept { return options_; }
  FileStore& store() noexcept { return store_; }

  Assessment create(AssessmentSpec spec);
  Assessment get(std::string_view id) const;
  AssessmentDocument document(std::string_view id, std::optional<std::int64_t> revision = std::nullopt) const;

  // Throws Error{RevisionConflict} when expected_revision is stale, unless
  // the stored response already has identical content (a replay), in which
  // case the current assessment is returned unchanged.
  Assessment respond(std::string_view id, std::int64_t expected_revision, const ResponseInput& input);
  Assessment import_responses(std::string_view id, std::int64_t expected_revision,
                              const std::vector<ResponseInput>& inputs);

  struct RescoreResult {
    Assessment assessment;
    std::vector<ScoreMismatch> corrected;
  };
  // Recomputes stored scores and saves only if something changed.
  RescoreResult rescore(std::string_view id);

  std::vector<std::string> targets(std::string_view id, std::optional<std::string_view> system_id) const;
  Completeness completeness(std::string_view id) const;

  // Pillar mode on a PerSystem assessment without a system returns the
  // organization rollup plus per-system breakdown.
  nlohmann::json aggregates(std::string_view id, AggregationMode mode, std::optional<std::string_view> system_id) const;
  std::vector<DiagnosticFlag> diagnostics(std::string_view id, std::optional<std::string_view> system_id) const;
  std::vector<TrajectoryPoint> trajectory(std::string_view organization_id) const;
  ReportBundle report(std::string_view id) const;

 private:
  const Questionnaire& q_;
  FileStore& store_;
  ServiceOptions options_;
};

// Aggregates / diagnostics / report over an assessment that is not in a store
// (CLI --file mode).
nlohmann::json aggregates_json(const Assessment& a, const Questionnaire& q, AggregationMode mode,
                               std::optional<std::string_view> system_id);
std::vector<DiagnosticFlag> diagnostics_for(const Assessment& a, const Questionnaire& q,
                                            std::optional<std::string_view> system_id,
                                            const DiagnosticThresholds& thresholds);

nlohmann::json questionnaire_view(const Questionnaire& q, std::optional<LifecycleStage> stage,
                                  GranularityMode granularity);

}  // namespace maturity
