#include "maturity/scoring.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "maturity/error.hpp"

namespace maturity {

std::string_view to_string(MetricRating r) noexcept {
  switch (r) {
    case MetricRating::Low: return "Low";
    case MetricRating::Medium: return "Medium";
    case MetricRating::High: return "High";
  }
  return "?";
}

char to_letter(MetricRating r) noexcept { return to_string(r).front(); }

std::optional<MetricRating> parse_rating(std::string_view text) noexcept {
  for (MetricRating r : kAllRatings) {
    if (text == to_string(r) || (text.size() == 1 && (text.front() == to_letter(r) || text.front() == to_letter(r) + 32))) return r;
  }
  return std::nullopt;
}

namespace {

bool* facet_slot(RobustnessFacets& f, std::string_view name) noexcept {
  if (name == "regular") return &f.regular;
  if (name == "systematic") return &f.systematic;
  if (name == "trained_personnel") return &f.trained_personnel;
  if (name == "sufficiently_resourced") return &f.sufficiently_resourced;
  if (name == "adaptive") return &f.adaptive;
  if (name == "cross_functional") return &f.cross_functional;
  return nullptr;
}

}  // namespace

bool set_facet(RobustnessFacets& facets, std::string_view name, bool value) noexcept {
  bool* slot = facet_slot(facets, name);
  if (!slot) return false;
  *slot = value;
  return true;
}

bool get_facet(const RobustnessFacets& facets, std::string_view name) noexcept {
  auto copy = facets;
  bool* slot = facet_slot(copy, name);
  return slot && *slot;
}

ScoreValue ScoreValue::numeric(int value) {
  if (value < 1 || value > 5) {
    throw Error(ErrorCode::DomainError, fmt::format("score {} outside 1..5", value));
  }
  return ScoreValue{value};
}

int ScoreValue::value() const {
  if (is_not_applicable()) throw Error(ErrorCode::DomainError, "N/A has no numeric value");
  return value_;
}

std::string ScoreValue::to_string() const { return is_numeric() ? std::to_string(value_) : "N/A"; }

std::string_view to_string(EvidenceKind kind) noexcept {
  switch (kind) {
    case EvidenceKind::SupportsActivity: return "SupportsActivity";
    case EvidenceKind::IndicatesAbsence: return "IndicatesAbsence";
    case EvidenceKind::NoEvidenceFound: return "NoEvidenceFound";
    case EvidenceKind::NotApplicableJustification: return "NotApplicableJustification";
  }
  return "?";
}

std::optional<EvidenceKind> parse_evidence_kind(std::string_view text) noexcept {
  if (text == "SupportsActivity" || text == "supports") return EvidenceKind::SupportsActivity;
  if (text == "IndicatesAbsence" || text == "absence") return EvidenceKind::IndicatesAbsence;
  if (text == "NoEvidenceFound" || text == "none-found") return EvidenceKind::NoEvidenceFound;
  if (text == "NotApplicableJustification" || text == "na") return EvidenceKind::NotApplicableJustification;
  return std::nullopt;
}

ScoreValue score_from_metrics(const MetricAssessment& m) noexcept {
  const int total = points(m.coverage) + points(m.robustness) + points(m.input_diversity);
  int score = 1;
  if (total >= 9) {
    score = 5;
  } else if (total == 8) {
    score = 4;
  } else if (total >= 6) {
    score = 3;
  } else if (total >= 4) {
    score = 2;
  }
  return ScoreValue::numeric(score);
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& f : failures) {
    if (!out.empty()) out += "; ";
    out += f;
  }
  return out;
}

ValidationReport validate_response(const ScoreValue& score, const std::vector<EvidenceItem>& evidence) {
  ValidationReport report;
  if (score.is_numeric() && evidence.empty()) {
    report.failures.emplace_back(kScoreWithoutEvidence);
  }
  if (score.is_not_applicable() &&
      std::none_of(evidence.begin(), evidence.end(), [](const EvidenceItem& e) {
        return e.kind == EvidenceKind::NotApplicableJustification;
      })) {
    report.failures.emplace_back(kNaRequiresJustification);
  }
  if (std::any_of(evidence.begin(), evidence.end(),
                  [](const EvidenceItem& e) { return e.description.empty(); })) {
    report.failures.emplace_back(kEmptyEvidenceDescription);
  }
  return report;
}

MetricRating suggest_coverage_rating(int covered, int applicable, const CoverageThresholds& thresholds) {
  if (applicable <= 0) throw Error(ErrorCode::DomainError, "applicable must be at least 1");
  if (covered < 0 || covered > applicable) {
    throw Error(ErrorCode::DomainError,
                fmt::format("covered ({}) must lie in 0..applicable ({})", covered, applicable));
  }
  // Tolerance keeps 1/3 and 2/3 boundaries inclusive despite rounding in the
  // threshold constants (e.g. 3 of 9 is exactly one third).
  constexpr double kEps = 1e-9;
  const double c = covered;
  const double a = applicable;
  if (c >= thresholds.high * a - kEps) return MetricRating::High;
  if (c >= thresholds.medium * a - kEps) return MetricRating::Medium;
  return MetricRating::Low;
}

}  // namespace maturity
