#include "maturity/codec.hpp"

#include <cstdlib>

#include <fmt/format.h>

#include "maturity/error.hpp"

namespace maturity::codec {

namespace {

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorCode::ParseError, message); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) bad(fmt::format("expected an object while reading '{}'", key));
  auto it = j.find(key);
  if (it == j.end()) bad(fmt::format("missing field '{}'", key));
  return *it;
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) bad(fmt::format("field '{}' must be a string", key));
  return v.get<std::string>();
}

std::string optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) bad(fmt::format("field '{}' must be a string", key));
  return it->get<std::string>();
}

Timestamp timestamp_field(const json& j, const char* key) {
  auto t = parse_timestamp(string_field(j, key));
  if (!t) bad(fmt::format("field '{}' is not a UTC timestamp", key));
  return *t;
}

MetricRating rating_field(const json& j, const char* key) {
  auto r = parse_rating(string_field(j, key));
  if (!r) bad(fmt::format("field '{}' must be Low, Medium or High", key));
  return *r;
}

json cell_average(const std::optional<Rational>& avg) {
  if (!avg) return nullptr;
  return decimal_number(*avg);
}

std::string exact(const std::optional<Rational>& avg) {
  if (!avg) return {};
  return fmt::format("{}/{}", avg->numerator(), avg->denominator());
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("invalid JSON: {}", e.what()));
  }
}

std::string canonical(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict); }

json decimal_number(const Rational& r) { return std::strtod(format_decimal(r, 2).c_str(), nullptr); }

json to_json(const EvidenceItem& e) {
  return {{"kind", to_string(e.kind)}, {"description", e.description}, {"sources", e.sources}};
}

json to_json(const MetricAssessment& m) {
  json j = {{"coverage", to_string(m.coverage)},
            {"robustness", to_string(m.robustness)},
            {"input_diversity", to_string(m.input_diversity)},
            {"robustness_facets", nullptr}};
  if (m.robustness_facets) {
    json f = json::object();
    for (auto name : kFacetNames) f[std::string(name)] = get_facet(*m.robustness_facets, name);
    j["robustness_facets"] = std::move(f);
  }
  return j;
}

json to_json(const Response& r) {
  json evidence = json::array();
  for (const auto& e : r.evidence) evidence.push_back(to_json(e));
  json score = r.score.is_numeric() ? json(r.score.value()) : json("N/A");
  return {{"target", r.target},
          {"system_id", r.system_id ? json(*r.system_id) : json(nullptr)},
          {"not_applicable", r.not_applicable()},
          {"metrics", r.metrics ? to_json(*r.metrics) : json(nullptr)},
          {"score", std::move(score)},
          {"evidence", std::move(evidence)},
          {"note", r.note},
          {"recorded_at", format_timestamp(r.recorded_at)}};
}

json to_json(const Assessment& a) {
  json systems = json::array();
  for (const auto& s : a.systems) {
    systems.push_back({{"system_id", s.system_id},
                       {"name", s.name},
                       {"stage", to_string(s.stage)},
                       {"description", s.description}});
  }
  json responses = json::array();
  for (const auto& [key, r] : a.responses) responses.push_back(to_json(r));
  return {{"assessment_id", a.assessment_id},
          {"organization", {{"id", a.organization.id}, {"name", a.organization.name}}},
          {"questionnaire_version", a.questionnaire_version},
          {"scope", to_string(a.scope)},
          {"granularity", to_string(a.granularity)},
          {"systems", std::move(systems)},
          {"responses", std::move(responses)},
          {"revision", a.revision},
          {"created_at", format_timestamp(a.created_at)},
          {"updated_at", format_timestamp(a.updated_at)},
          {"as_of", a.as_of ? json(format_timestamp(*a.as_of)) : json(nullptr)}};
}

json to_json(const AggregateCell& c) {
  json j = {{"average", cell_average(c.average)},
            {"contributors", c.contributors},
            {"not_applicable", c.not_applicable},
            {"status", c.has_data() ? "ok" : "no data"}};
  if (c.average) j["exact"] = exact(c.average);
  return j;
}

json to_json(const PillarScores& s) {
  json axes = json::array();
  for (Pillar p : kAllPillars) {
    json cell = to_json(s[p]);
    cell["axis"] = to_string(p);
    axes.push_back(std::move(cell));
  }
  return {{"axes", std::move(axes)}, {"overall", cell_average(s.overall)}};
}

json to_json(const DimensionScores& s) {
  json axes = json::array();
  for (Dimension d : kAllDimensions) {
    json cell = to_json(s[d]);
    cell["axis"] = to_string(d);
    axes.push_back(std::move(cell));
  }
  return {{"axes", std::move(axes)}, {"overall", cell_average(s.overall)}};
}

json to_json(const SystemRollup& r) {
  json per_system = json::array();
  for (const auto& [id, scores] : r.per_system) {
    json entry = to_json(scores);
    entry["system_id"] = id;
    per_system.push_back(std::move(entry));
  }
  return {{"organization", to_json(r.organization)}, {"per_system", std::move(per_system)}};
}

json to_json(const DiagnosticFlag& f) {
  return {{"kind", to_string(f.kind)},
          {"rationale", f.rationale},
          {"thresholds", {{"high", f.thresholds.high}, {"low", f.thresholds.low}}}};
}

json to_json(const std::vector<DiagnosticFlag>& flags) {
  json out = json::array();
  for (const auto& f : flags) out.push_back(to_json(f));
  return out;
}

json to_json(const Completeness& c) {
  auto entry = [](const CompletenessEntry& e) {
    return json{{"system_id", e.system_id.empty() ? json(nullptr) : json(e.system_id)},
                {"answered", e.answered},
                {"applicable", e.applicable},
                {"fraction", e.fraction()}};
  };
  json per_system = json::array();
  for (const auto& e : c.per_system) per_system.push_back(entry(e));
  json unanswered = json::array();
  for (const auto& u : c.unanswered) {
    unanswered.push_back({{"target", u.target}, {"system_id", u.system_id.empty() ? json(nullptr) : json(u.system_id)}});
  }
  return {{"overall", entry(c.overall)}, {"per_system", std::move(per_system)}, {"unanswered", std::move(unanswered)}};
}

json to_json(const TrajectoryPoint& p) {
  return {{"assessment_id", p.assessment_id},
          {"as_of", format_timestamp(p.as_of)},
          {"questionnaire_version", p.questionnaire_version},
          {"pillars", to_json(p.pillars)},
          {"dimensions", p.dimensions ? to_json(*p.dimensions) : json(nullptr)}};
}

json to_json(const std::vector<TrajectoryPoint>& points) {
  json out = json::array();
  for (const auto& p : points) out.push_back(to_json(p));
  return out;
}

json to_json(const Statement& s) {
  json refs = json::array();
  for (const auto& r : s.rmf_refs) refs.push_back(r.label());
  json dims = json::array();
  for (Dimension d : kAllDimensions) {
    if (s.has_dimension(d)) dims.push_back(to_string(d));
  }
  return {{"id", s.id},
          {"topic_id", s.topic_id},
          {"text", s.text},
          {"emphasis", s.emphasis},
          {"rmf_refs", std::move(refs)},
          {"dimensions", std::move(dims)},
          {"stage", to_string(s.stage)}};
}

json to_json(const Topic& t, GranularityMode granularity) {
  json pillars = json::array();
  for (Pillar p : t.pillars()) pillars.push_back(to_string(p));
  json j = {{"id", t.id},
            {"name", t.name},
            {"summary", t.summary},
            {"stage", to_string(t.stage)},
            {"pillars", std::move(pillars)},
            {"statement_count", t.statements.size()}};
  json statements = json::array();
  for (const auto& s : t.statements) {
    if (granularity == GranularityMode::StatementLevel) {
      statements.push_back(to_json(s));
    } else {
      // Topic-level screens still show sub-statements as a coverage checklist.
      statements.push_back({{"id", s.id}, {"text", s.text}});
    }
  }
  j["statements"] = std::move(statements);
  return j;
}

EvidenceItem evidence_from_json(const json& j) {
  EvidenceItem e;
  auto kind = parse_evidence_kind(string_field(j, "kind"));
  if (!kind) bad("evidence kind must be SupportsActivity, IndicatesAbsence, NoEvidenceFound or NotApplicableJustification");
  e.kind = *kind;
  e.description = string_field(j, "description");
  if (auto it = j.find("sources"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) bad("evidence sources must be an array of strings");
    for (const auto& s : *it) {
      if (!s.is_string()) bad("evidence sources must be an array of strings");
      e.sources.push_back(s.get<std::string>());
    }
  }
  return e;
}

MetricAssessment metrics_from_json(const json& j) {
  MetricAssessment m;
  m.coverage = rating_field(j, "coverage");
  m.robustness = rating_field(j, "robustness");
  m.input_diversity = rating_field(j, "input_diversity");
  if (auto it = j.find("robustness_facets"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) bad("robustness_facets must be an object of booleans");
    RobustnessFacets f;
    for (const auto& [name, value] : it->items()) {
      if (!value.is_boolean() || !set_facet(f, name, value.get<bool>())) {
        bad(fmt::format("unknown or non-boolean robustness facet '{}'", name));
      }
    }
    m.robustness_facets = f;
  }
  return m;
}

namespace {

std::vector<EvidenceItem> evidence_list(const json& j) {
  std::vector<EvidenceItem> out;
  auto it = j.find("evidence");
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) bad("evidence must be an array");
  for (const auto& e : *it) out.push_back(evidence_from_json(e));
  return out;
}

std::optional<ScoreValue> score_from_json(const json& j) {
  auto it = j.find("score");
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_string() && it->get<std::string>() == "N/A") return ScoreValue::not_applicable();
  if (it->is_number_integer()) {
    const int v = it->get<int>();
    if (v < 1 || v > 5) bad("score must be 1..5 or \"N/A\"");
    return ScoreValue::numeric(v);
  }
  bad("score must be 1..5 or \"N/A\"");
}

}  // namespace

ResponseInput response_input_from_json(const json& j) {
  if (!j.is_object()) bad("response must be an object");
  ResponseInput in;
  in.target = string_field(j, "target");
  if (auto sys = optional_string(j, "system_id"); !sys.empty()) in.system_id = sys;

  const bool na_flag = j.value("not_applicable", false);
  auto metrics = j.find("metrics");
  const bool has_metrics = metrics != j.end() && !metrics->is_null();
  if (na_flag && has_metrics) bad("a response cannot carry both metrics and not_applicable");
  if (!na_flag && !has_metrics) bad("a response needs metrics or not_applicable: true");
  if (has_metrics) in.metrics = metrics_from_json(*metrics);

  in.evidence = evidence_list(j);
  in.note = optional_string(j, "note");
  in.declared_score = score_from_json(j);
  return in;
}

std::vector<ResponseInput> response_inputs_from_json(const json& j) {
  const json* arr = &j;
  if (j.is_object() && j.contains("responses")) arr = &j["responses"];
  if (!arr->is_array()) bad("expected an array of responses");
  std::vector<ResponseInput> out;
  for (const auto& r : *arr) out.push_back(response_input_from_json(r));
  return out;
}

Assessment assessment_from_json(const json& j) {
  if (!j.is_object()) bad("assessment must be an object");
  Assessment a;
  a.assessment_id = string_field(j, "assessment_id");
  const json& org = field(j, "organization");
  a.organization.id = string_field(org, "id");
  a.organization.name = string_field(org, "name");
  a.questionnaire_version = string_field(j, "questionnaire_version");
  auto scope = parse_scope(string_field(j, "scope"));
  if (!scope) bad("scope must be PerSystem or Holistic");
  a.scope = *scope;
  auto granularity = parse_granularity(string_field(j, "granularity"));
  if (!granularity) bad("granularity must be TopicLevel or StatementLevel");
  a.granularity = *granularity;

  const json& systems = field(j, "systems");
  if (!systems.is_array()) bad("systems must be an array");
  for (const auto& sj : systems) {
    AISystemProfile s;
    s.system_id = string_field(sj, "system_id");
    s.name = string_field(sj, "name");
    auto stage = parse_stage(string_field(sj, "stage"));
    if (!stage) bad(fmt::format("system '{}' has an unknown stage", s.system_id));
    s.stage = *stage;
    s.description = optional_string(sj, "description");
    a.systems.push_back(std::move(s));
  }

  const json& responses = field(j, "responses");
  if (!responses.is_array()) bad("responses must be an array");
  for (const auto& rj : responses) {
    ResponseInput in = response_input_from_json(rj);
    Response r;
    r.target = in.target;
    r.system_id = in.system_id;
    r.metrics = in.metrics;
    if (!in.declared_score) bad(fmt::format("stored response '{}' lacks a score", in.target));
    r.score = *in.declared_score;
    r.evidence = std::move(in.evidence);
    r.note = std::move(in.note);
    r.recorded_at = timestamp_field(rj, "recorded_at");
    if (!a.responses.emplace(r.key(), r).second) {
      bad(fmt::format("duplicate response for target '{}'", r.target));
    }
  }

  const json& rev = field(j, "revision");
  if (!rev.is_number_integer()) bad("revision must be an integer");
  a.revision = rev.get<std::int64_t>();
  a.created_at = timestamp_field(j, "created_at");
  a.updated_at = timestamp_field(j, "updated_at");
  if (auto it = j.find("as_of"); it != j.end() && !it->is_null()) a.as_of = timestamp_field(j, "as_of");
  return a;
}

}  // namespace maturity::codec
