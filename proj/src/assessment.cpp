#include "maturity/assessment.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "maturity/error.hpp"

namespace maturity {

std::string_view to_string(ScopeMode mode) noexcept {
  return mode == ScopeMode::PerSystem ? "PerSystem" : "Holistic";
}

std::string_view to_string(GranularityMode mode) noexcept {
  return mode == GranularityMode::TopicLevel ? "TopicLevel" : "StatementLevel";
}

std::optional<ScopeMode> parse_scope(std::string_view text) noexcept {
  if (text == "PerSystem" || text == "per-system") return ScopeMode::PerSystem;
  if (text == "Holistic" || text == "holistic") return ScopeMode::Holistic;
  return std::nullopt;
}

std::optional<GranularityMode> parse_granularity(std::string_view text) noexcept {
  if (text == "TopicLevel" || text == "topic") return GranularityMode::TopicLevel;
  if (text == "StatementLevel" || text == "statement") return GranularityMode::StatementLevel;
  return std::nullopt;
}

const AISystemProfile* Assessment::find_system(std::string_view id) const noexcept {
  for (const auto& s : systems) {
    if (s.system_id == id) return &s;
  }
  return nullptr;
}

Assessment create_assessment(const AssessmentSpec& spec, const Questionnaire& q, Timestamp now) {
  if (spec.systems.empty()) {
    throw Error(ErrorCode::ValidationError, "an assessment needs at least one AI system");
  }
  std::set<std::string> ids;
  for (const auto& s : spec.systems) {
    if (s.system_id.empty()) throw Error(ErrorCode::ValidationError, "system_id must be non-empty");
    if (!ids.insert(s.system_id).second) {
      throw Error(ErrorCode::ValidationError, fmt::format("duplicate system_id '{}'", s.system_id), {s.system_id});
    }
  }
  if (spec.organization.id.empty()) {
    throw Error(ErrorCode::ValidationError, "organization id must be non-empty");
  }
  if (spec.assessment_id.empty()) {
    throw Error(ErrorCode::ValidationError, "assessment id must be non-empty");
  }
  Assessment a;
  a.assessment_id = spec.assessment_id;
  a.organization = spec.organization;
  a.questionnaire_version = q.version();
  a.scope = spec.scope;
  a.granularity = spec.granularity;
  a.systems = spec.systems;
  a.revision = 1;
  a.created_at = now;
  a.updated_at = now;
  a.as_of = spec.as_of;
  return a;
}

namespace {

const AISystemProfile& require_system(const Assessment& a, std::string_view id) {
  const auto* s = a.find_system(id);
  if (!s) throw Error(ErrorCode::UnknownSystem, fmt::format("unknown system '{}'", id), {std::string(id)});
  return *s;
}

enum class TargetKind { Topic, Statement };

struct ResolvedTarget {
  TargetKind kind;
  LifecycleStage stage;
};

std::optional<ResolvedTarget> resolve_target(const Questionnaire& q, std::string_view target) {
  if (!target.empty() && std::all_of(target.begin(), target.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    int id = 0;
    std::from_chars(target.data(), target.data() + target.size(), id);
    if (const Topic* t = q.find_topic(id); t && std::to_string(id) == target) {
      return ResolvedTarget{TargetKind::Topic, t->stage};
    }
    return std::nullopt;
  }
  if (const Statement* s = q.find_statement(target)) return ResolvedTarget{TargetKind::Statement, s->stage};
  return std::nullopt;
}

std::vector<std::string> scope_systems(const Assessment& a) {
  std::vector<std::string> out;
  if (a.scope == ScopeMode::Holistic) {
    out.emplace_back();
  } else {
    for (const auto& s : a.systems) out.push_back(s.system_id);
  }
  return out;
}

std::optional<std::string_view> as_system_arg(const std::string& id) {
  if (id.empty()) return std::nullopt;
  return std::string_view(id);
}

// Everything record_response checks except the revision bump.
Response validate_input(const Assessment& a, const ResponseInput& in, const Questionnaire& q, Timestamp now) {
  if (a.questionnaire_version != q.version()) {
    throw Error(ErrorCode::ValidationError,
                fmt::format("assessment uses questionnaire {} but {} is loaded", a.questionnaire_version,
                            q.version()));
  }
  if (a.scope == ScopeMode::PerSystem) {
    if (!in.system_id) {
      throw Error(ErrorCode::ValidationError, "per-system assessments need a system_id on every response",
                  {in.target});
    }
    require_system(a, *in.system_id);
  } else if (in.system_id) {
    throw Error(ErrorCode::ValidationError, "holistic assessments do not take a system_id", {*in.system_id});
  }

  auto resolved = resolve_target(q, in.target);
  if (!resolved) {
    throw Error(ErrorCode::UnknownTarget, fmt::format("'{}' is not a topic or statement id", in.target), {in.target});
  }
  const TargetKind expected =
      a.granularity == GranularityMode::TopicLevel ? TargetKind::Topic : TargetKind::Statement;
  if (resolved->kind != expected) {
    throw Error(ErrorCode::GranularityMismatch,
                fmt::format("target '{}' does not match {} granularity", in.target, to_string(a.granularity)),
                {in.target});
  }
  const LifecycleStage stage =
      effective_stage(a, in.system_id ? std::optional<std::string_view>(*in.system_id) : std::nullopt);
  if (resolved->stage > stage) {
    throw Error(ErrorCode::InapplicableTarget,
                fmt::format("target '{}' applies from {} but the effective stage is {}", in.target,
                            to_string(resolved->stage), to_string(stage)),
                {in.target});
  }

  Response r;
  r.target = in.target;
  r.system_id = in.system_id;
  r.metrics = in.metrics;
  r.score = in.metrics ? score_from_metrics(*in.metrics) : ScoreValue::not_applicable();
  r.evidence = in.evidence;
  r.note = in.note;
  r.recorded_at = now;

  if (in.declared_score && *in.declared_score != r.score) {
    throw Error(ErrorCode::ValidationError,
                fmt::format("declared score {} for '{}' disagrees with metrics (score {})",
                            in.declared_score->to_string(), in.target, r.score.to_string()),
                {in.target});
  }
  if (auto report = validate_response(r.score, r.evidence); !report.passed()) {
    throw Error(ErrorCode::ValidationError, report.summary(), {in.target});
  }
  return r;
}

}  // namespace

LifecycleStage effective_stage(const Assessment& a, std::optional<std::string_view> system_id) {
  if (system_id) return require_system(a, *system_id).stage;
  LifecycleStage stage = LifecycleStage::PlanningAndDesign;
  for (const auto& s : a.systems) stage = std::max(stage, s.stage);
  return stage;
}

std::vector<std::string> applicable_targets(const Assessment& a, const Questionnaire& q,
                                            std::optional<std::string_view> system_id) {
  std::vector<std::string> out;
  for (const Topic* t : applicable_topics(q, effective_stage(a, system_id))) {
    if (a.granularity == GranularityMode::TopicLevel) {
      out.push_back(std::to_string(t->id));
    } else {
      for (const auto& s : t->statements) out.push_back(s.id);
    }
  }
  return out;
}

Assessment record_response(Assessment a, const ResponseInput& input, const Questionnaire& q, Timestamp now) {
  Response r = validate_input(a, input, q, now);
  a.responses.insert_or_assign(r.key(), std::move(r));
  a.revision += 1;
  a.updated_at = now;
  return a;
}

Assessment record_responses(Assessment a, const std::vector<ResponseInput>& inputs, const Questionnaire& q,
                            Timestamp now) {
  std::vector<Response> validated;
  validated.reserve(inputs.size());
  for (const auto& in : inputs) validated.push_back(validate_input(a, in, q, now));
  for (auto& r : validated) a.responses.insert_or_assign(r.key(), std::move(r));
  a.revision += 1;
  a.updated_at = now;
  return a;
}

Completeness completeness(const Assessment& a, const Questionnaire& q) {
  Completeness c;
  for (const std::string& sys : scope_systems(a)) {
    CompletenessEntry entry;
    entry.system_id = sys;
    for (const auto& target : applicable_targets(a, q, as_system_arg(sys))) {
      ++entry.applicable;
      if (a.responses.count({target, sys})) {
        ++entry.answered;
      } else {
        c.unanswered.push_back({target, sys});
      }
    }
    c.overall.answered += entry.answered;
    c.overall.applicable += entry.applicable;
    if (a.scope == ScopeMode::PerSystem) c.per_system.push_back(std::move(entry));
  }
  return c;
}

std::vector<ScoreMismatch> rescore(Assessment& a) {
  std::vector<ScoreMismatch> changed;
  for (auto& [key, r] : a.responses) {
    const ScoreValue expected = r.metrics ? score_from_metrics(*r.metrics) : ScoreValue::not_applicable();
    if (expected != r.score) {
      changed.push_back({key, r.score, expected});
      r.score = expected;
    }
  }
  return changed;
}

std::vector<std::string> check_assessment(const Assessment& a, const Questionnaire& q) {
  std::vector<std::string> problems;
  if (a.systems.empty()) problems.emplace_back("assessment has no systems");
  std::set<std::string> ids;
  for (const auto& s : a.systems) {
    if (!ids.insert(s.system_id).second) problems.push_back(fmt::format("duplicate system_id '{}'", s.system_id));
  }
  if (a.revision < 1) problems.emplace_back("revision must be at least 1");
  if (a.questionnaire_version != q.version()) {
    problems.push_back(fmt::format("questionnaire version {} differs from loaded {}", a.questionnaire_version,
                                   q.version()));
  }
  for (const auto& [key, r] : a.responses) {
    if (key != r.key()) {
      problems.push_back(fmt::format("response key ({}, {}) does not match its content", key.first, key.second));
      continue;
    }
    try {
      ResponseInput in{r.target, r.system_id, r.metrics, r.evidence, r.note, r.score};
      validate_input(a, in, q, r.recorded_at);
    } catch (const Error& e) {
      problems.push_back(fmt::format("response {}{}: {}: {}", r.target,
                                     r.system_id ? "@" + *r.system_id : std::string{}, e.machine_code(),
                                     e.what()));
    }
  }
  return problems;
}

}  // namespace maturity
