#include "maturity/questionnaire.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "maturity/error.hpp"

namespace maturity {

using nlohmann::json;

std::string_view to_string(LifecycleStage stage) noexcept {
  switch (stage) {
    case LifecycleStage::PlanningAndDesign: return "PlanningAndDesign";
    case LifecycleStage::BuildingAndData: return "BuildingAndData";
    case LifecycleStage::Deployment: return "Deployment";
  }
  return "?";
}

std::string_view to_string(Pillar pillar) noexcept {
  switch (pillar) {
    case Pillar::Map: return "MAP";
    case Pillar::Measure: return "MEASURE";
    case Pillar::Manage: return "MANAGE";
    case Pillar::Govern: return "GOVERN";
  }
  return "?";
}

std::string_view to_string(Dimension dimension) noexcept {
  switch (dimension) {
    case Dimension::PerformanceValidity: return "PerformanceValidity";
    case Dimension::FairnessBias: return "FairnessBias";
    case Dimension::Privacy: return "Privacy";
    case Dimension::Environmental: return "Environmental";
    case Dimension::TransparencyAccountability: return "TransparencyAccountability";
    case Dimension::SecurityResilience: return "SecurityResilience";
    case Dimension::Explainability: return "Explainability";
    case Dimension::ThirdParty: return "ThirdParty";
    case Dimension::Other: return "Other";
  }
  return "?";
}

std::optional<LifecycleStage> parse_stage(std::string_view text) noexcept {
  if (text == "PlanningAndDesign" || text == "plan") return LifecycleStage::PlanningAndDesign;
  if (text == "BuildingAndData" || text == "build") return LifecycleStage::BuildingAndData;
  if (text == "Deployment" || text == "deploy") return LifecycleStage::Deployment;
  return std::nullopt;
}

std::optional<Pillar> parse_pillar(std::string_view text) noexcept {
  for (Pillar p : kAllPillars) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<Dimension> parse_dimension(std::string_view text) noexcept {
  for (Dimension d : kAllDimensions) {
    if (to_string(d) == text) return d;
  }
  return std::nullopt;
}

std::string RmfRef::label() const {
  if (custom()) return "custom";
  return fmt::format("{} {}.{}", to_string(*pillar), category, subcategory);
}

bool Statement::has_pillar(Pillar p) const noexcept {
  return std::any_of(rmf_refs.begin(), rmf_refs.end(),
                     [p](const RmfRef& r) { return r.pillar == p; });
}

bool Statement::has_dimension(Dimension d) const noexcept {
  if (d == Dimension::Other) return dimensions.empty();
  return std::find(dimensions.begin(), dimensions.end(), d) != dimensions.end();
}

bool Statement::custom_only() const noexcept {
  return std::all_of(rmf_refs.begin(), rmf_refs.end(), [](const RmfRef& r) { return r.custom(); });
}

std::vector<Pillar> Topic::pillars() const {
  std::vector<Pillar> out;
  for (Pillar p : kAllPillars) {
    if (std::any_of(statements.begin(), statements.end(),
                    [p](const Statement& s) { return s.has_pillar(p); })) {
      out.push_back(p);
    }
  }
  return out;
}

std::size_t Questionnaire::statement_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : topics_) n += t.statements.size();
  return n;
}

const Topic* Questionnaire::find_topic(int id) const noexcept {
  for (const auto& t : topics_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const Statement* Questionnaire::find_statement(std::string_view id) const noexcept {
  for (const auto& t : topics_) {
    for (const auto& s : t.statements) {
      if (s.id == id) return &s;
    }
  }
  return nullptr;
}

std::vector<const Statement*> Questionnaire::all_statements() const {
  std::vector<const Statement*> out;
  for (const auto& t : topics_) {
    for (const auto& s : t.statements) out.push_back(&s);
  }
  return out;
}

namespace {

[[noreturn]] void integrity(std::string message, std::vector<std::string> ids = {}) {
  throw Error(ErrorCode::IntegrityError, std::move(message), std::move(ids));
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) integrity(fmt::format("{}: missing field '{}'", where, key));
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) integrity(fmt::format("{}: field '{}' must be a string", where, key));
  return v.get<std::string>();
}

int require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) integrity(fmt::format("{}: field '{}' must be an integer", where, key));
  return v.get<int>();
}

RmfRef parse_ref(const json& j, const std::string& sid) {
  if (!j.is_object()) integrity(fmt::format("statement {}: rmf_refs entries must be objects", sid), {sid});
  const bool custom = j.value("custom", false);
  const bool has_any = j.contains("pillar") || j.contains("category") || j.contains("subcategory");
  if (custom) {
    if (has_any) integrity(fmt::format("statement {}: custom ref must not name a pillar", sid), {sid});
    return RmfRef::make_custom();
  }
  const std::string where = fmt::format("statement {} ref", sid);
  auto pillar = parse_pillar(require_string(j, "pillar", where));
  if (!pillar) integrity(fmt::format("statement {}: ref names an unknown pillar", sid), {sid});
  const int category = require_int(j, "category", where);
  const int subcategory = require_int(j, "subcategory", where);
  if (category < 1 || subcategory < 1) {
    integrity(fmt::format("statement {}: ref category/subcategory must be positive", sid), {sid});
  }
  return RmfRef::make(*pillar, category, subcategory);
}

void check_version(const std::string& version) {
  static const std::regex semver(R"(^\d+\.\d+\.\d+$)");
  if (!std::regex_match(version, semver)) {
    integrity(fmt::format("version '{}' is not a semantic version", version));
  }
}

}  // namespace

Questionnaire load_questionnaire_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("questionnaire is not valid JSON: {}", e.what()));
  }
  if (!root.is_object()) throw Error(ErrorCode::ParseError, "questionnaire root must be an object");

  Questionnaire q;
  q.version_ = require_string(root, "version", "questionnaire");
  check_version(q.version_);

  if (auto it = root.find("notes"); it != root.end()) {
    if (!it->is_array()) integrity("questionnaire: notes must be an array of strings");
    for (const auto& n : *it) {
      if (!n.is_string()) integrity("questionnaire: notes must be an array of strings");
      q.notes_.push_back(n.get<std::string>());
    }
  }

  const json& dims = require(root, "dimensions", "questionnaire");
  if (!dims.is_array() || dims.size() != kAllDimensions.size()) {
    integrity(fmt::format("expected {} dimensions", kAllDimensions.size()));
  }
  for (std::size_t i = 0; i < kAllDimensions.size(); ++i) {
    if (!dims[i].is_string() || dims[i].get<std::string>() != to_string(kAllDimensions[i])) {
      integrity(fmt::format("dimension {} must be '{}'", i, to_string(kAllDimensions[i])));
    }
  }

  const json& topics = require(root, "topics", "questionnaire");
  if (!topics.is_array()) integrity("questionnaire: topics must be an array");
  if (topics.size() != kTopicCount) {
    integrity(fmt::format("expected {} topics, found {}", kTopicCount, topics.size()));
  }
  for (std::size_t i = 0; i < topics.size(); ++i) {
    const json& tj = topics[i];
    const std::string where = fmt::format("topic #{}", i + 1);
    if (!tj.is_object()) integrity(where + ": must be an object");
    Topic t;
    t.id = require_int(tj, "id", where);
    if (t.id != static_cast<int>(i) + 1) {
      integrity(fmt::format("topics must be numbered 1..9 in order; found {} at position {}", t.id, i + 1),
                {std::to_string(t.id)});
    }
    t.name = require_string(tj, "name", where);
    t.summary = require_string(tj, "summary", where);
    auto stage = parse_stage(require_string(tj, "stage", where));
    if (!stage) integrity(fmt::format("topic {}: unknown stage", t.id), {std::to_string(t.id)});
    const LifecycleStage expected = t.id <= 3   ? LifecycleStage::PlanningAndDesign
                                    : t.id <= 7 ? LifecycleStage::BuildingAndData
                                                : LifecycleStage::Deployment;
    if (*stage != expected) {
      integrity(fmt::format("topic {}: stage must be {}", t.id, to_string(expected)), {std::to_string(t.id)});
    }
    t.stage = *stage;
    if (t.name.empty() || t.summary.empty()) {
      integrity(fmt::format("topic {}: name and summary must be non-empty", t.id), {std::to_string(t.id)});
    }
    q.topics_.push_back(std::move(t));
  }

  const json& statements = require(root, "statements", "questionnaire");
  if (!statements.is_array()) integrity("questionnaire: statements must be an array");
  std::set<std::string> seen;
  for (const json& sj : statements) {
    if (!sj.is_object()) integrity("questionnaire: statements entries must be objects");
    Statement s;
    s.id = require_string(sj, "id", "statement");
    const std::string where = fmt::format("statement {}", s.id);
    if (!seen.insert(s.id).second) integrity(fmt::format("duplicate statement id {}", s.id), {s.id});
    s.topic_id = require_int(sj, "topic_id", where);
    Topic* topic = nullptr;
    for (auto& t : q.topics_) {
      if (t.id == s.topic_id) topic = &t;
    }
    if (!topic) integrity(fmt::format("{}: topic_id {} does not exist", where, s.topic_id), {s.id});
    const char letter = static_cast<char>('a' + topic->statements.size());
    if (s.id != fmt::format("{}{}", s.topic_id, letter)) {
      integrity(fmt::format("{}: statement letters in topic {} must be consecutive from 'a' (expected {}{})",
                            where, s.topic_id, s.topic_id, letter),
                {s.id});
    }
    s.text = require_string(sj, "text", where);
    s.emphasis = require_string(sj, "emphasis", where);
    if (s.text.empty()) integrity(where + ": text must be non-empty", {s.id});
    if (s.text.find(s.emphasis) == std::string::npos) {
      integrity(where + ": emphasis must occur in text", {s.id});
    }
    const json& refs = require(sj, "rmf_refs", where);
    if (!refs.is_array() || refs.empty()) integrity(where + ": rmf_refs must be non-empty", {s.id});
    for (const auto& r : refs) s.rmf_refs.push_back(parse_ref(r, s.id));
    if (s.rmf_refs.size() > 1 && std::any_of(s.rmf_refs.begin(), s.rmf_refs.end(), [](const RmfRef& r) { return r.custom(); })) {
      integrity(where + ": a custom ref must be the only ref", {s.id});
    }

    if (auto it = sj.find("dimensions"); it != sj.end()) {
      if (!it->is_array()) integrity(where + ": dimensions must be an array", {s.id});
      for (const auto& d : *it) {
        auto dim = d.is_string() ? parse_dimension(d.get<std::string>()) : std::nullopt;
        if (!dim) integrity(where + ": unknown dimension", {s.id});
        if (*dim == Dimension::Other) {
          integrity(where + ": Other is implied by an empty tag list and must not be listed", {s.id});
        }
        if (std::find(s.dimensions.begin(), s.dimensions.end(), *dim) != s.dimensions.end()) {
          integrity(where + ": duplicate dimension tag", {s.id});
        }
        s.dimensions.push_back(*dim);
      }
    }
    s.stage = topic->stage;
    topic->statements.push_back(std::move(s));
  }

  for (const auto& t : q.topics_) {
    const auto expected = static_cast<std::size_t>(kStatementsPerTopic[t.id - 1]);
    if (t.statements.size() != expected) {
      integrity(fmt::format("topic {}: expected {} statements, found {}", t.id, expected, t.statements.size()),
                {std::to_string(t.id)});
    }
  }
  if (q.statement_count() != kStatementCount) {
    integrity(fmt::format("expected {} statements, found {}", kStatementCount, q.statement_count()));
  }
  return q;
}

Questionnaire load_questionnaire(std::istream& source) {
  std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::ParseError, "questionnaire source is empty");
  }
  return load_questionnaire_text(text);
}

Questionnaire load_questionnaire_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, fmt::format("cannot open questionnaire file {}", path));
  return load_questionnaire(in);
}

const Questionnaire& bundled_questionnaire() {
  static const Questionnaire q = load_questionnaire_text(bundled_questionnaire_text());
  return q;
}

std::string serialize_questionnaire(const Questionnaire& q) {
  json root;
  root["version"] = q.version();
  root["notes"] = q.notes();
  json dims = json::array();
  for (Dimension d : kAllDimensions) dims.push_back(to_string(d));
  root["dimensions"] = std::move(dims);
  json topics = json::array();
  json statements = json::array();
  for (const auto& t : q.topics()) {
    topics.push_back({{"id", t.id}, {"name", t.name}, {"summary", t.summary}, {"stage", to_string(t.stage)}});
    for (const auto& s : t.statements) {
      json refs = json::array();
      for (const auto& r : s.rmf_refs) {
        if (r.custom()) {
          refs.push_back({{"custom", true}});
        } else {
          refs.push_back({{"pillar", to_string(*r.pillar)}, {"category", r.category}, {"subcategory", r.subcategory}});
        }
      }
      json sd = json::array();
      for (Dimension d : s.dimensions) sd.push_back(to_string(d));
      statements.push_back({{"id", s.id},
                            {"topic_id", s.topic_id},
                            {"text", s.text},
                            {"emphasis", s.emphasis},
                            {"rmf_refs", std::move(refs)},
                            {"dimensions", std::move(sd)}});
    }
  }
  root["topics"] = std::move(topics);
  root["statements"] = std::move(statements);
  return root.dump(2) + "\n";
}

std::vector<const Topic*> applicable_topics(const Questionnaire& q, LifecycleStage stage) {
  std::vector<const Topic*> out;
  for (const auto& t : q.topics()) {
    if (t.stage <= stage) out.push_back(&t);
  }
  return out;
}

std::vector<const Statement*> statements_for_pillar(const Questionnaire& q, Pillar pillar) {
  std::vector<const Statement*> out;
  for (const Statement* s : q.all_statements()) {
    if (s->has_pillar(pillar)) out.push_back(s);
  }
  return out;
}

std::vector<const Statement*> statements_for_dimension(const Questionnaire& q, Dimension dimension) {
  std::vector<const Statement*> out;
  for (const Statement* s : q.all_statements()) {
    if (s->has_dimension(dimension)) out.push_back(s);
  }
  return out;
}

}  // namespace maturity
