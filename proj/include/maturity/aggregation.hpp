#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "maturity/assessment.hpp"
#include "maturity/questionnaire.hpp"

namespace maturity {

// Averages are kept exact; rounding happens only at serialization.
using Rational = boost::rational<std::int64_t>;

struct AggregateCell {
  std::optional<Rational> average;  // nullopt means "no data", never zero
  std::size_t contributors = 0;
  std::size_t not_applicable = 0;

  bool has_data() const noexcept { return average.has_value(); }
  friend bool operator==(const AggregateCell&, const AggregateCell&) = default;
};

struct PillarScores {
  std::array<AggregateCell, 4> pillars{};  // indexed by Pillar, order MAP, MEASURE, MANAGE, GOVERN
  // Tool convention: mean of the numeric scores of all answered targets in
  // the selection, each counted once.
  std::optional<Rational> overall;

  const AggregateCell& operator[](Pillar p) const noexcept { return pillars[static_cast<std::size_t>(p)]; }
  AggregateCell& operator[](Pillar p) noexcept { return pillars[static_cast<std::size_t>(p)]; }
  friend bool operator==(const PillarScores&, const PillarScores&) = default;
};

struct DimensionScores {
  std::array<AggregateCell, 9> dimensions{};  // indexed by Dimension
  std::optional<Rational> overall;

  const AggregateCell& operator[](Dimension d) const noexcept { return dimensions[static_cast<std::size_t>(d)]; }
  AggregateCell& operator[](Dimension d) noexcept { return dimensions[static_cast<std::size_t>(d)]; }
  friend bool operator==(const DimensionScores&, const DimensionScores&) = default;
};

// With a system id, only that system's responses count (PerSystem scope
// only). Without one, every response in the assessment counts.
// Throws Error{UnknownSystem | ScopeUnsupported | NoData}.
PillarScores aggregate_by_pillar(const Assessment& a, const Questionnaire& q,
                                 std::optional<std::string_view> system_id = std::nullopt);

// StatementLevel only; throws Error{GranularityUnsupported} otherwise, plus
// the aggregate_by_pillar errors.
DimensionScores aggregate_by_dimension(const Assessment& a, const Questionnaire& q,
                                       std::optional<std::string_view> system_id = std::nullopt);

struct SystemRollup {
  PillarScores organization;  // contributors = systems with data for that pillar
  std::vector<std::pair<std::string, PillarScores>> per_system;
};

// Unweighted mean of per-system pillar averages. Throws
// Error{ScopeUnsupported} for holistic assessments, Error{NoData} when no
// response exists at all.
SystemRollup aggregate_across_systems(const Assessment& a, const Questionnaire& q);

enum class DiagnosticKind : std::uint8_t { EthicsWashingPattern, IllInformedRiskManagement };

std::string_view to_string(DiagnosticKind kind) noexcept;

struct DiagnosticThresholds {
  double high = 4.0;
  double low = 2.0;

  friend bool operator==(const DiagnosticThresholds&, const DiagnosticThresholds&) = default;
};

struct DiagnosticFlag {
  DiagnosticKind kind;
  std::string rationale;
  DiagnosticThresholds thresholds;

  friend bool operator==(const DiagnosticFlag&, const DiagnosticFlag&) = default;
};

// EthicsWashingPattern: GOVERN >= high while MAP, MEASURE, MANAGE <= low.
// IllInformedRiskManagement: GOVERN, MANAGE >= high while MAP, MEASURE <= low.
// A pillar with no data satisfies neither side.
std::vector<DiagnosticFlag> detect_patterns(const PillarScores& scores, const DiagnosticThresholds& thresholds = {});

struct TrajectoryPoint {
  std::string assessment_id;
  Timestamp as_of{};
  std::string questionnaire_version;
  PillarScores pillars;
  std::optional<DimensionScores> dimensions;  // StatementLevel assessments only
};

// One point per assessment ordered by (as-of, assessment id). Throws
// Error{MixedOrganizations}.
std::vector<TrajectoryPoint> trajectory(const std::vector<Assessment>& assessments, const Questionnaire& q);

// Round to `places` decimals, ties to even, computed exactly.
std::string format_decimal(const Rational& value, int places = 2);

}  // namespace maturity
