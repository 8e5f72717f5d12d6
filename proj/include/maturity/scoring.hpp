#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maturity {

// Degree to which one metric is satisfied. The underlying value is the point
// count used by the score thresholds.
enum class MetricRating : std::uint8_t { Low = 1, Medium = 2, High = 3 };

inline constexpr std::array<MetricRating, 3> kAllRatings = {MetricRating::Low, MetricRating::Medium,
                                                            MetricRating::High};

constexpr int points(MetricRating r) noexcept { return static_cast<int>(r); }

std::string_view to_string(MetricRating r) noexcept;   // "Low" / "Medium" / "High"
char to_letter(MetricRating r) noexcept;                // 'L' / 'M' / 'H'
std::optional<MetricRating> parse_rating(std::string_view text) noexcept;  // names or letters

// The six implementation ideals folded into the robustness metric. Recorded
// for the evaluator's reference; they never feed the score.
struct RobustnessFacets {
  bool regular = false;
  bool systematic = false;
  bool trained_personnel = false;
  bool sufficiently_resourced = false;
  bool adaptive = false;
  bool cross_functional = false;

  friend bool operator==(const RobustnessFacets&, const RobustnessFacets&) = default;
};

inline constexpr std::array<std::string_view, 6> kFacetNames = {
    "regular", "systematic", "trained_personnel", "sufficiently_resourced", "adaptive", "cross_functional"};

// Sets the facet named `name`; false if the name is unknown.
bool set_facet(RobustnessFacets& facets, std::string_view name, bool value) noexcept;
bool get_facet(const RobustnessFacets& facets, std::string_view name) noexcept;

struct MetricAssessment {
  MetricRating coverage = MetricRating::Low;
  MetricRating robustness = MetricRating::Low;
  MetricRating input_diversity = MetricRating::Low;
  std::optional<RobustnessFacets> robustness_facets;

  friend bool operator==(const MetricAssessment&, const MetricAssessment&) = default;
};

// 1..5 or N/A.
class ScoreValue {
 public:
  static ScoreValue numeric(int value);  // throws Error{DomainError} outside 1..5
  static ScoreValue not_applicable() noexcept { return ScoreValue{}; }

  bool is_numeric() const noexcept { return value_ != 0; }
  bool is_not_applicable() const noexcept { return value_ == 0; }
  int value() const;  // throws Error{DomainError} on N/A

  std::string to_string() const;  // "3" or "N/A"

  friend bool operator==(const ScoreValue&, const ScoreValue&) = default;

 private:
  ScoreValue() = default;
  explicit ScoreValue(int v) : value_(v) {}
  int value_ = 0;
};

enum class EvidenceKind : std::uint8_t {
  SupportsActivity,
  IndicatesAbsence,   // evidence that the activity is not performed
  NoEvidenceFound,    // nothing either way
  NotApplicableJustification,
};

std::string_view to_string(EvidenceKind kind) noexcept;
// Canonical names plus the short CLI forms supports/absence/none-found/na.
std::optional<EvidenceKind> parse_evidence_kind(std::string_view text) noexcept;

struct EvidenceItem {
  EvidenceKind kind = EvidenceKind::SupportsActivity;
  std::string description;
  std::vector<std::string> sources;  // document names, URLs, or "first-hand"

  friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

// Sum the three point values and map 3 -> 1, 4-5 -> 2, 6-7 -> 3, 8 -> 4, 9 -> 5.
ScoreValue score_from_metrics(const MetricAssessment& m) noexcept;

struct ValidationReport {
  std::vector<std::string> failures;

  bool passed() const noexcept { return failures.empty(); }
  std::string summary() const;  // failures joined with "; "
};

inline constexpr std::string_view kScoreWithoutEvidence = "score without evidence";
inline constexpr std::string_view kNaRequiresJustification = "N/A requires justification";
inline constexpr std::string_view kEmptyEvidenceDescription = "evidence description must be non-empty";

ValidationReport validate_response(const ScoreValue& score, const std::vector<EvidenceItem>& evidence);

// Fractions of covered sub-statements at which the suggestion steps up.
struct CoverageThresholds {
  double medium = 1.0 / 3.0;
  double high = 2.0 / 3.0;
};

// Non-binding hint for the coverage metric. Throws Error{DomainError} when
// applicable is zero, covered is negative, or covered exceeds applicable.
MetricRating suggest_coverage_rating(int covered, int applicable, const CoverageThresholds& thresholds = {});

}  // namespace maturity
