#include "maturity/service.hpp"

#include <random>

#include <fmt/format.h>

#include "maturity/codec.hpp"
#include "maturity/error.hpp"

namespace maturity {

using codec::json;

std::optional<AggregationMode> parse_aggregation_mode(std::string_view text) noexcept {
  if (text == "pillar") return AggregationMode::Pillar;
  if (text == "dimension") return AggregationMode::Dimension;
  return std::nullopt;
}

namespace {

std::string default_id(const AssessmentSpec& spec, Timestamp now) {
  thread_local std::mt19937 rng{std::random_device{}()};
  const auto stamp = format_timestamp(now);  // 2024-03-01T12:00:00Z
  std::string compact;
  for (char c : stamp) {
    if (c >= '0' && c <= '9') compact += c;
  }
  return fmt::format("{}-{}-{:06x}", spec.organization.id, compact, rng() & 0xffffff);
}

bool same_content(const Response& stored, const ResponseInput& in) {
  return stored.metrics == in.metrics && stored.evidence == in.evidence && stored.note == in.note &&
         stored.system_id == in.system_id;
}

}  // namespace

AssessmentService::AssessmentService(const Questionnaire& q, FileStore& store, ServiceOptions options)
    : q_(q), store_(store), options_(std::move(options)) {
  if (!options_.make_id) options_.make_id = default_id;
  if (!options_.clock) options_.clock = system_now;
}

Assessment AssessmentService::create(AssessmentSpec spec) {
  const Timestamp now = options_.clock();
  if (spec.assessment_id.empty()) spec.assessment_id = options_.make_id(spec, now);
  if (!is_safe_id(spec.assessment_id) || !is_safe_id(spec.organization.id)) {
    throw Error(ErrorCode::ValidationError, "assessment and organization ids may only use [A-Za-z0-9._-]",
                {spec.assessment_id, spec.organization.id});
  }
  Assessment a = create_assessment(spec, q_, now);
  store_.save(a, 0);
  return a;
}

Assessment AssessmentService::get(std::string_view id) const { return store_.load(id).assessment; }

AssessmentDocument AssessmentService::document(std::string_view id, std::optional<std::int64_t> revision) const {
  return store_.load(id, revision);
}

Assessment AssessmentService::respond(std::string_view id, std::int64_t expected_revision, const ResponseInput& input) {
  Assessment current = get(id);
  if (current.revision != expected_revision) {
    auto it = current.responses.find({input.target, input.system_id.value_or("")});
    if (it != current.responses.end() && same_content(it->second, input)) return current;
    throw Error(ErrorCode::RevisionConflict,
                fmt::format("expected revision {} but the stored revision is {}", expected_revision, current.revision),
                {std::string(id)});
  }
  Assessment next = record_response(std::move(current), input, q_, options_.clock());
  store_.save(next, expected_revision);
  return next;
}

Assessment AssessmentService::import_responses(std::string_view id, std::int64_t expected_revision,
                                               const std::vector<ResponseInput>& inputs) {
  Assessment current = get(id);
  if (current.revision != expected_revision) {
    throw Error(ErrorCode::RevisionConflict,
                fmt::format("expected revision {} but the stored revision is {}", expected_revision, current.revision),
                {std::string(id)});
  }
  Assessment next = record_responses(std::move(current), inputs, q_, options_.clock());
  store_.save(next, expected_revision);
  return next;
}

AssessmentService::RescoreResult AssessmentService::rescore(std::string_view id) {
  Assessment a = get(id);
  const std::int64_t expected = a.revision;
  RescoreResult result{a, maturity::rescore(a)};
  if (!result.corrected.empty()) {
    a.revision += 1;
    a.updated_at = options_.clock();
    store_.save(a, expected);
  }
  result.assessment = std::move(a);
  return result;
}

std::vector<std::string> AssessmentService::targets(std::string_view id, std::optional<std::string_view> system_id) const {
  return applicable_targets(get(id), q_, system_id);
}

Completeness AssessmentService::completeness(std::string_view id) const { return maturity::completeness(get(id), q_); }

json AssessmentService::aggregates(std::string_view id, AggregationMode mode,
                                   std::optional<std::string_view> system_id) const {
  return aggregates_json(get(id), q_, mode, system_id);
}

std::vector<DiagnosticFlag> AssessmentService::diagnostics(std::string_view id,
                                                           std::optional<std::string_view> system_id) const {
  return diagnostics_for(get(id), q_, system_id, options_.diagnostics);
}

std::vector<TrajectoryPoint> AssessmentService::trajectory(std::string_view organization_id) const {
  return maturity::trajectory(store_.load_organization(organization_id), q_);
}

ReportBundle AssessmentService::report(std::string_view id) const {
  const Assessment a = get(id);
  return render_report(a, q_, compute_report_inputs(a, q_, options_.diagnostics));
}

json aggregates_json(const Assessment& a, const Questionnaire& q, AggregationMode mode,
                     std::optional<std::string_view> system_id) {
  json out = {{"assessment_id", a.assessment_id},
              {"revision", a.revision},
              {"mode", mode == AggregationMode::Pillar ? "pillar" : "dimension"},
              {"system_id", system_id ? json(std::string(*system_id)) : json(nullptr)}};
  if (mode == AggregationMode::Dimension) {
    out["dimensions"] = codec::to_json(aggregate_by_dimension(a, q, system_id));
  } else if (a.scope == ScopeMode::PerSystem && !system_id) {
    const SystemRollup rollup = aggregate_across_systems(a, q);
    out["pillars"] = codec::to_json(rollup.organization);
    out["per_system"] = codec::to_json(rollup)["per_system"];
  } else {
    out["pillars"] = codec::to_json(aggregate_by_pillar(a, q, system_id));
  }
  return out;
}

std::vector<DiagnosticFlag> diagnostics_for(const Assessment& a, const Questionnaire& q,
                                            std::optional<std::string_view> system_id,
                                            const DiagnosticThresholds& thresholds) {
  const PillarScores scores = (a.scope == ScopeMode::PerSystem && !system_id)
                                  ? aggregate_across_systems(a, q).organization
                                  : aggregate_by_pillar(a, q, system_id);
  return detect_patterns(scores, thresholds);
}

json questionnaire_view(const Questionnaire& q, std::optional<LifecycleStage> stage, GranularityMode granularity) {
  const auto topics = applicable_topics(q, stage.value_or(LifecycleStage::Deployment));
  json out = {{"version", q.version()},
              {"notes", q.notes()},
              {"stage", stage ? json(to_string(*stage)) : json(nullptr)},
              {"granularity", to_string(granularity)}};
  json list = json::array();
  std::size_t statements = 0;
  for (const Topic* t : topics) {
    list.push_back(codec::to_json(*t, granularity));
    statements += t->statements.size();
  }
  out["topic_count"] = topics.size();
  out["statement_count"] = statements;
  out["topics"] = std::move(list);
  return out;
}

}  // namespace maturity
