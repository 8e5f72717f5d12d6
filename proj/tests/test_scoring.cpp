#include <doctest.h>

#include <algorithm>
#include <map>

#include "maturity/error.hpp"
#include "maturity/scoring.hpp"
#include "support.hpp"

using namespace maturity;
using testing::metrics;

namespace {

// Rule-of-thumb table keyed by the sorted letters (H < L < M alphabetically,
// so sort by rank instead).
std::string sorted_profile(const MetricAssessment& m) {
  std::string s = {to_letter(m.coverage), to_letter(m.robustness), to_letter(m.input_diversity)};
  auto rank = [](char c) { return c == 'H' ? 0 : c == 'M' ? 1 : 2; };
  std::sort(s.begin(), s.end(), [&](char a, char b) { return rank(a) < rank(b); });
  return s;
}

const std::map<std::string, int> kTable = {
    {"HHH", 5}, {"HHM", 4}, {"HMM", 3}, {"HHL", 3}, {"HML", 3}, {"MMM", 3},
    {"MML", 2}, {"MLL", 2}, {"HLL", 2}, {"LLL", 1},
};

}  // namespace

TEST_CASE("score matches the rule-of-thumb table for all 27 combinations") {
  int checked = 0;
  for (MetricRating c : kAllRatings) {
    for (MetricRating r : kAllRatings) {
      for (MetricRating d : kAllRatings) {
        const MetricAssessment m = metrics(c, r, d);
        CAPTURE(sorted_profile(m));
        CHECK(score_from_metrics(m).value() == kTable.at(sorted_profile(m)));
        ++checked;
      }
    }
  }
  CHECK(checked == 27);
}

TEST_CASE("worked examples") {
  CHECK(score_from_metrics(metrics("LLL")).value() == 1);
  CHECK(score_from_metrics(metrics("HML")).value() == 3);
  CHECK(score_from_metrics(metrics("HHM")).value() == 4);
}

TEST_CASE("score value") {
  CHECK_THROWS_AS(ScoreValue::numeric(0), Error);
  CHECK_THROWS_AS(ScoreValue::numeric(6), Error);
  CHECK(ScoreValue::numeric(5).to_string() == "5");
  const ScoreValue na = ScoreValue::not_applicable();
  CHECK(na.is_not_applicable());
  CHECK(na.to_string() == "N/A");
  CHECK_THROWS_AS(na.value(), Error);
  CHECK(na != ScoreValue::numeric(1));
}

TEST_CASE("ratings parse by name and letter") {
  CHECK(parse_rating("H") == MetricRating::High);
  CHECK(parse_rating("Medium") == MetricRating::Medium);
  CHECK(parse_rating("l") == MetricRating::Low);
  CHECK_FALSE(parse_rating("X"));
  CHECK(points(MetricRating::Medium) == 2);
}

TEST_CASE("robustness facets are informative only") {
  MetricAssessment m = metrics("MMM");
  RobustnessFacets f;
  for (auto name : kFacetNames) CHECK(set_facet(f, name, true));
  CHECK_FALSE(set_facet(f, "heroic", true));
  CHECK(get_facet(f, "adaptive"));
  m.robustness_facets = f;
  CHECK(score_from_metrics(m) == score_from_metrics(metrics("MMM")));
}

TEST_CASE("evidence gate") {
  const ScoreValue three = ScoreValue::numeric(3);
  const ScoreValue na = ScoreValue::not_applicable();

  CHECK(validate_response(three, {testing::supports()}).passed());
  CHECK(validate_response(na, {testing::justification()}).passed());

  auto fails_with = [](const ValidationReport& r, std::string_view reason) {
    return std::find(r.failures.begin(), r.failures.end(), reason) != r.failures.end();
  };
  CHECK(fails_with(validate_response(three, {}), kScoreWithoutEvidence));
  CHECK(fails_with(validate_response(na, {}), kNaRequiresJustification));
  CHECK(fails_with(validate_response(na, {testing::supports()}), kNaRequiresJustification));
  // An absence finding is still evidence for a numeric score.
  CHECK(validate_response(three, {{EvidenceKind::IndicatesAbsence, "no policy published", {}}}).passed());
  CHECK(fails_with(validate_response(three, {{EvidenceKind::SupportsActivity, "", {}}}), kEmptyEvidenceDescription));
  CHECK(validate_response(three, {}).summary() == "score without evidence");
}

TEST_CASE("coverage suggestion") {
  CHECK(suggest_coverage_rating(0, 9) == MetricRating::Low);
  CHECK(suggest_coverage_rating(2, 9) == MetricRating::Low);
  CHECK(suggest_coverage_rating(3, 9) == MetricRating::Medium);
  CHECK(suggest_coverage_rating(5, 9) == MetricRating::Medium);
  CHECK(suggest_coverage_rating(6, 9) == MetricRating::High);
  CHECK(suggest_coverage_rating(9, 9) == MetricRating::High);
  CHECK(suggest_coverage_rating(1, 3) == MetricRating::Medium);
  CHECK(suggest_coverage_rating(2, 3) == MetricRating::High);
  CHECK(suggest_coverage_rating(1, 2, {0.6, 0.9}) == MetricRating::Low);
  CHECK_THROWS_AS(suggest_coverage_rating(1, 0), Error);
  CHECK_THROWS_AS(suggest_coverage_rating(4, 3), Error);
  CHECK_THROWS_AS(suggest_coverage_rating(-1, 3), Error);
}
