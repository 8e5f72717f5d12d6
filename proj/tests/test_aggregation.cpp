#include <doctest.h>

#include <random>

#include "maturity/aggregation.hpp"
#include "maturity/error.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace maturity;
using namespace testing;

namespace {

const Questionnaire& Q() { return bundled_questionnaire(); }

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::StorageError;
}

Assessment answered(GranularityMode g, const std::vector<ResponseInput>& inputs) {
  return record_responses(fresh(g), inputs, Q(), at("2024-01-02"));
}

bool equals(const AggregateCell& cell, const oracle::Mean& m) {
  if (cell.contributors != static_cast<std::size_t>(m.count)) return false;
  if (cell.not_applicable != static_cast<std::size_t>(m.na)) return false;
  if (m.count == 0) return !cell.average;
  return cell.average && cell.average->numerator() * m.count == cell.average->denominator() * m.sum;
}

}  // namespace

TEST_CASE("statement-level pillar averages match the oracle") {
  std::mt19937 rng(7);
  const auto pillars = oracle::pillar_tags();
  const auto dims = oracle::dimension_tags();
  const char* letters = "LMH";
  for (int round = 0; round < 40; ++round) {
    std::vector<ResponseInput> inputs;
    std::vector<oracle::Answer> answers;
    for (const Statement* s : Q().all_statements()) {
      const int roll = static_cast<int>(rng() % 5);
      if (roll == 0) continue;
      if (roll == 1) {
        inputs.push_back(not_applicable(s->id));
        answers.push_back({s->id, std::nullopt});
        continue;
      }
      std::string profile = {letters[rng() % 3], letters[rng() % 3], letters[rng() % 3]};
      inputs.push_back(scored(s->id, profile));
      answers.push_back({s->id, score_from_metrics(metrics(profile)).value()});
    }
    if (inputs.empty()) continue;
    const Assessment a = answered(GranularityMode::StatementLevel, inputs);
    const PillarScores got = aggregate_by_pillar(a, Q());
    const auto want = oracle::by_tag(answers, pillars);
    for (Pillar p : kAllPillars) {
      CAPTURE(to_string(p));
      auto it = want.find(std::string(to_string(p)));
      CHECK(equals(got[p], it == want.end() ? oracle::Mean{} : it->second));
    }
    const DimensionScores got_d = aggregate_by_dimension(a, Q());
    const auto want_d = oracle::by_tag(answers, dims);
    for (Dimension d : kAllDimensions) {
      auto it = want_d.find(std::string(to_string(d)));
      CHECK(equals(got_d[d], it == want_d.end() ? oracle::Mean{} : it->second));
    }
  }
}

TEST_CASE("hand-computed statement-level example") {
  // 4e: MEASURE only; 8a: MEASURE and MANAGE; 1b: MAP and GOVERN.
  const Assessment a =
      answered(GranularityMode::StatementLevel,
               {scored("4e", "HHH"), scored("8a", "LLL"), scored("1b", "HML"), not_applicable("4l")});
  const PillarScores s = aggregate_by_pillar(a, Q());
  CHECK(*s[Pillar::Measure].average == Rational(3));
  CHECK(s[Pillar::Measure].contributors == 2);
  CHECK(*s[Pillar::Manage].average == Rational(1));
  CHECK(*s[Pillar::Map].average == Rational(3));
  CHECK(*s[Pillar::Govern].average == Rational(3));
  CHECK(*s.overall == Rational(9, 3));

  const DimensionScores d = aggregate_by_dimension(a, Q());
  CHECK(*d[Dimension::FairnessBias].average == Rational(5));
  CHECK(*d[Dimension::PerformanceValidity].average == Rational(1));
  CHECK_FALSE(d[Dimension::Privacy].has_data());
  CHECK(d[Dimension::Other].contributors == 1);  // 1b
  CHECK(d[Dimension::Other].not_applicable == 1);  // 4l
}

TEST_CASE("topic-level answers count toward the union of their statement pillars") {
  // Topic 4 spans MEASURE and GOVERN (via 4k); topic 1 spans MAP and GOVERN.
  const Assessment a = answered(GranularityMode::TopicLevel, {scored("4", "HHH"), scored("1", "LLL")});
  const PillarScores s = aggregate_by_pillar(a, Q());
  CHECK(*s[Pillar::Measure].average == Rational(5));
  CHECK(*s[Pillar::Map].average == Rational(1));
  CHECK(*s[Pillar::Govern].average == Rational(3));
  CHECK(s[Pillar::Govern].contributors == 2);
  CHECK_FALSE(s[Pillar::Manage].has_data());

  CHECK(error_of([&] { aggregate_by_dimension(a, Q()); }) == ErrorCode::GranularityUnsupported);
}

TEST_CASE("N/A responses are inert") {
  const Assessment base = answered(GranularityMode::StatementLevel, {scored("4e", "HML"), scored("7b", "MML")});
  const Assessment with_na = record_responses(base, {not_applicable("4f"), not_applicable("7c")}, Q(), at("2024-01-03"));
  const PillarScores x = aggregate_by_pillar(base, Q());
  const PillarScores y = aggregate_by_pillar(with_na, Q());
  for (Pillar p : kAllPillars) {
    CHECK(x[p].average == y[p].average);
    CHECK(x[p].contributors == y[p].contributors);
  }
  CHECK(x.overall == y.overall);
}

TEST_CASE("all N/A gives no data, never zero") {
  const Assessment a = answered(GranularityMode::StatementLevel, {not_applicable("4e")});
  const PillarScores s = aggregate_by_pillar(a, Q());
  CHECK_FALSE(s[Pillar::Measure].has_data());
  CHECK(s[Pillar::Measure].not_applicable == 1);
  CHECK_FALSE(s.overall);
}

TEST_CASE("empty assessment has no data") {
  CHECK(error_of([&] { aggregate_by_pillar(fresh(GranularityMode::TopicLevel), Q()); }) == ErrorCode::NoData);
}

TEST_CASE("system filters and cross-system rollup") {
  AssessmentSpec spec;
  spec.assessment_id = "ps";
  spec.organization = {"acme", "Acme"};
  spec.scope = ScopeMode::PerSystem;
  spec.granularity = GranularityMode::StatementLevel;
  spec.systems = {{"a", "A", LifecycleStage::Deployment, ""},
                  {"b", "B", LifecycleStage::Deployment, ""},
                  {"c", "C", LifecycleStage::Deployment, ""}};
  Assessment ps = create_assessment(spec, Q(), at("2024-01-01"));
  // System a: MEASURE scores 5 and 1 -> 3. System b: MEASURE 2. System c: nothing.
  ps = record_responses(ps, {scored("4e", "HHH", "a"), scored("4f", "LLL", "a"), scored("4d", "MLL", "b")}, Q(),
                        at("2024-01-02"));

  CHECK(*aggregate_by_pillar(ps, Q(), "a")[Pillar::Measure].average == Rational(3));
  CHECK(error_of([&] { aggregate_by_pillar(ps, Q(), "zzz"); }) == ErrorCode::UnknownSystem);
  // No system filter pools all responses.
  CHECK(*aggregate_by_pillar(ps, Q())[Pillar::Measure].average == Rational(8, 3));

  const SystemRollup r = aggregate_across_systems(ps, Q());
  CHECK(r.per_system.size() == 3);
  CHECK(*r.organization[Pillar::Measure].average == Rational(5, 2));  // mean of 3 and 2
  CHECK(r.organization[Pillar::Measure].contributors == 2);
  CHECK_FALSE(r.organization[Pillar::Map].has_data());
  CHECK_FALSE(r.per_system[2].second.overall);

  const Assessment holistic = answered(GranularityMode::TopicLevel, {scored("4", "HHH")});
  CHECK(error_of([&] { aggregate_across_systems(holistic, Q()); }) == ErrorCode::ScopeUnsupported);
  CHECK(error_of([&] { aggregate_by_pillar(holistic, Q(), "sys"); }) == ErrorCode::ScopeUnsupported);
}

TEST_CASE("diagnostic patterns") {
  auto scores = [](std::optional<Rational> map, std::optional<Rational> measure, std::optional<Rational> manage,
                   std::optional<Rational> govern) {
    PillarScores s;
    s[Pillar::Map].average = map;
    s[Pillar::Measure].average = measure;
    s[Pillar::Manage].average = manage;
    s[Pillar::Govern].average = govern;
    return s;
  };
  const auto washing = detect_patterns(scores(Rational(2), Rational(3, 2), Rational(1), Rational(4)));
  REQUIRE(washing.size() == 1);
  CHECK(washing[0].kind == DiagnosticKind::EthicsWashingPattern);
  CHECK(washing[0].thresholds == DiagnosticThresholds{});
  CHECK(washing[0].rationale.find("GOVERN 4.00") != std::string::npos);

  const auto ill = detect_patterns(scores(Rational(1), Rational(2), Rational(9, 2), Rational(5)));
  REQUIRE(ill.size() == 1);
  CHECK(ill[0].kind == DiagnosticKind::IllInformedRiskManagement);

  CHECK(detect_patterns(scores(Rational(201, 100), Rational(1), Rational(1), Rational(5))).empty());
  CHECK(detect_patterns(scores(Rational(1), Rational(1), Rational(1), Rational(399, 100))).empty());
  CHECK(detect_patterns(scores(std::nullopt, Rational(1), Rational(1), Rational(5))).empty());
  CHECK(detect_patterns(scores(Rational(3), Rational(3), Rational(3), Rational(3))).empty());

  DiagnosticThresholds lenient{3.0, 3.0};
  CHECK(detect_patterns(scores(Rational(3), Rational(3), Rational(3), Rational(3)), lenient).size() == 2);
}

TEST_CASE("trajectory ordering and organization check") {
  AssessmentSpec spec = holistic_spec(GranularityMode::TopicLevel);
  std::vector<Assessment> list;
  for (const auto& [id, date] : std::vector<std::pair<std::string, std::string>>{
           {"c", "2024-06-01"}, {"a", "2023-01-01"}, {"b", "2024-06-01"}}) {
    spec.assessment_id = id;
    spec.as_of = at(date.c_str());
    Assessment a = create_assessment(spec, Q(), at("2025-01-01"));
    if (id != "b") a = record_response(a, scored("4", id == "a" ? "LLL" : "HHH"), Q(), at("2025-01-02"));
    list.push_back(a);
  }
  const auto points = trajectory(list, Q());
  REQUIRE(points.size() == 3);
  CHECK(points[0].assessment_id == "a");
  CHECK(points[1].assessment_id == "b");
  CHECK(points[2].assessment_id == "c");
  CHECK(*points[0].pillars[Pillar::Measure].average == Rational(1));
  CHECK_FALSE(points[1].pillars[Pillar::Measure].has_data());
  CHECK_FALSE(points[0].dimensions);

  list.push_back(create_assessment(holistic_spec(GranularityMode::TopicLevel, LifecycleStage::Deployment, "other"),
                                   Q(), at("2025-01-01")));
  CHECK(error_of([&] { trajectory(list, Q()); }) == ErrorCode::MixedOrganizations);
  CHECK(trajectory({}, Q()).empty());
}

TEST_CASE("decimal formatting rounds half to even") {
  CHECK(format_decimal(Rational(3)) == "3.00");
  CHECK(format_decimal(Rational(1, 3)) == "0.33");
  CHECK(format_decimal(Rational(2, 3)) == "0.67");
  CHECK(format_decimal(Rational(5, 8)) == "0.62");
  CHECK(format_decimal(Rational(7, 8)) == "0.88");
  CHECK(format_decimal(Rational(17, 8)) == "2.12");
  CHECK(format_decimal(Rational(-5, 8)) == "-0.62");
  CHECK(format_decimal(Rational(1, 1000)) == "0.00");
  CHECK(format_decimal(Rational(5, 2), 0) == "2");
  CHECK(format_decimal(Rational(7, 2), 0) == "4");
}
