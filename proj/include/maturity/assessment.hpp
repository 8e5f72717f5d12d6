#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maturity/questionnaire.hpp"
#include "maturity/scoring.hpp"
#include "maturity/time.hpp"

namespace maturity {

enum class ScopeMode : std::uint8_t { PerSystem, Holistic };
enum class GranularityMode : std::uint8_t { TopicLevel, StatementLevel };

std::string_view to_string(ScopeMode mode) noexcept;
std::string_view to_string(GranularityMode mode) noexcept;
// Canonical names plus per-system/holistic and topic/statement.
std::optional<ScopeMode> parse_scope(std::string_view text) noexcept;
std::optional<GranularityMode> parse_granularity(std::string_view text) noexcept;

struct Organization {
  std::string id;
  std::string name;

  friend bool operator==(const Organization&, const Organization&) = default;
};

struct AISystemProfile {
  std::string system_id;
  std::string name;
  LifecycleStage stage = LifecycleStage::PlanningAndDesign;
  std::string description;

  friend bool operator==(const AISystemProfile&, const AISystemProfile&) = default;
};

// Responses are keyed by (target, system id); the system id is empty for
// holistic assessments.
using ResponseKey = std::pair<std::string, std::string>;

struct Response {
  std::string target;                    // "4" or "4e"
  std::optional<std::string> system_id;  // present iff scope is PerSystem
  std::optional<MetricAssessment> metrics;  // nullopt marks N/A
  ScoreValue score = ScoreValue::not_applicable();
  std::vector<EvidenceItem> evidence;
  std::string note;
  Timestamp recorded_at{};

  bool not_applicable() const noexcept { return !metrics.has_value(); }
  ResponseKey key() const { return {target, system_id.value_or("")}; }

  friend bool operator==(const Response&, const Response&) = default;
};

struct Assessment {
  std::string assessment_id;
  Organization organization;
  std::string questionnaire_version;
  ScopeMode scope = ScopeMode::Holistic;
  GranularityMode granularity = GranularityMode::TopicLevel;
  std::vector<AISystemProfile> systems;
  std::map<ResponseKey, Response> responses;
  std::int64_t revision = 0;
  Timestamp created_at{};
  Timestamp updated_at{};
  std::optional<Timestamp> as_of;  // overrides created_at for trajectory ordering

  const AISystemProfile* find_system(std::string_view id) const noexcept;
  Timestamp effective_as_of() const noexcept { return as_of.value_or(created_at); }

  friend bool operator==(const Assessment&, const Assessment&) = default;
};

struct AssessmentSpec {
  std::string assessment_id;
  Organization organization;
  ScopeMode scope = ScopeMode::Holistic;
  GranularityMode granularity = GranularityMode::TopicLevel;
  std::vector<AISystemProfile> systems;
  std::optional<Timestamp> as_of;
};

// Throws Error{ValidationError} for an empty or duplicated system list.
Assessment create_assessment(const AssessmentSpec& spec, const Questionnaire& q, Timestamp now);

// The system's stage, or for holistic scope the most advanced stage across
// all systems. Throws Error{UnknownSystem}.
LifecycleStage effective_stage(const Assessment& a, std::optional<std::string_view> system_id = std::nullopt);

// Topic ids ("1".."9") or statement ids ("1a"...), depending on granularity.
std::vector<std::string> applicable_targets(const Assessment& a, const Questionnaire& q,
                                            std::optional<std::string_view> system_id = std::nullopt);

struct ResponseInput {
  std::string target;
  std::optional<std::string> system_id;
  std::optional<MetricAssessment> metrics;  // nullopt = N/A
  std::vector<EvidenceItem> evidence;
  std::string note;
  // Supplied by bulk import; must agree with the score the metrics produce.
  std::optional<ScoreValue> declared_score;
};

// Validates and upserts one response, bumping the revision. Throws
// Error{InapplicableTarget | GranularityMismatch | UnknownTarget |
// UnknownSystem | ValidationError}.
Assessment record_response(Assessment a, const ResponseInput& input, const Questionnaire& q, Timestamp now);

// All-or-nothing bulk variant; the revision moves by exactly one.
Assessment record_responses(Assessment a, const std::vector<ResponseInput>& inputs, const Questionnaire& q,
                            Timestamp now);

struct UnansweredTarget {
  std::string target;
  std::string system_id;  // empty for holistic
};

struct CompletenessEntry {
  std::string system_id;  // empty for holistic
  std::size_t answered = 0;
  std::size_t applicable = 0;
  double fraction() const noexcept {
    return applicable == 0 ? 0.0 : static_cast<double>(answered) / static_cast<double>(applicable);
  }
};

struct Completeness {
  CompletenessEntry overall;
  std::vector<CompletenessEntry> per_system;  // one entry per system for PerSystem scope
  std::vector<UnansweredTarget> unanswered;
};

// N/A responses count as answered.
Completeness completeness(const Assessment& a, const Questionnaire& q);

struct ScoreMismatch {
  ResponseKey key;
  ScoreValue stored;
  ScoreValue expected;
};

// Recomputes every stored score from its metrics; returns what changed.
std::vector<ScoreMismatch> rescore(Assessment& a);

// Full invariant check of a (possibly externally edited) assessment. Returns
// one message per violation; empty when consistent.
std::vector<std::string> check_assessment(const Assessment& a, const Questionnaire& q);

}  // namespace maturity
