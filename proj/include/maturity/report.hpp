#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maturity/aggregation.hpp"
#include "maturity/assessment.hpp"
#include "maturity/questionnaire.hpp"

namespace maturity {

inline constexpr const char* kDimensionUnavailableReason =
    "Dimension scores are averages over individually scored statements; this assessment was scored at topic "
    "level, so no dimension profile can be computed.";

// Everything the report shows besides the raw responses.
struct ReportInputs {
  Completeness completeness;
  std::optional<PillarScores> pillars;           // organization level; nullopt when nothing is answered
  std::optional<SystemRollup> rollup;            // PerSystem scope only
  std::optional<DimensionScores> dimensions;     // StatementLevel only
  std::vector<DiagnosticFlag> diagnostics;
};

ReportInputs compute_report_inputs(const Assessment& a, const Questionnaire& q,
                                   const DiagnosticThresholds& thresholds = {});

struct ReportBundle {
  std::string markdown;
  nlohmann::json chart_data;
};

// Deterministic: identical inputs give byte-identical output.
ReportBundle render_report(const Assessment& a, const Questionnaire& q, const ReportInputs& inputs);

// Anchor id shared by the markdown report and the evidence index.
std::string evidence_anchor(const Response& r);

}  // namespace maturity
