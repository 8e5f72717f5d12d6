#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "maturity/aggregation.hpp"
#include "maturity/assessment.hpp"
#include "maturity/questionnaire.hpp"
#include "maturity/scoring.hpp"

// JSON shapes shared by the store, the HTTP API, the CLI and the report
// generator. nlohmann::json keeps object keys sorted, so dump() output is
// canonical: same value, same bytes.
namespace maturity::codec {

using nlohmann::json;

json to_json(const EvidenceItem& e);
json to_json(const MetricAssessment& m);
json to_json(const Response& r);
json to_json(const Assessment& a);
json to_json(const AggregateCell& c);
json to_json(const PillarScores& s);
json to_json(const DimensionScores& s);
json to_json(const SystemRollup& r);
json to_json(const DiagnosticFlag& f);
json to_json(const std::vector<DiagnosticFlag>& flags);
json to_json(const Completeness& c);
json to_json(const TrajectoryPoint& p);
json to_json(const std::vector<TrajectoryPoint>& points);
json to_json(const Statement& s);
json to_json(const Topic& t, GranularityMode granularity);

// Decoders throw Error{ParseError} on shape or type problems. They do not
// check questionnaire-dependent invariants; see check_assessment.
EvidenceItem evidence_from_json(const json& j);
MetricAssessment metrics_from_json(const json& j);
Assessment assessment_from_json(const json& j);

// One entry of a response array (as stored in assessment documents, used by
// bulk import and PUT bodies). "metrics": null or "not_applicable": true
// marks N/A; a "score" field becomes the declared score.
ResponseInput response_input_from_json(const json& j);
std::vector<ResponseInput> response_inputs_from_json(const json& j);

// Parse text, mapping syntax errors to Error{ParseError}.
json parse(const std::string& text);

// Compact canonical form used for checksums.
std::string canonical(const json& j);

// Rounded-half-even 2-decimal value as a JSON number.
json decimal_number(const Rational& r);

}  // namespace maturity::codec
