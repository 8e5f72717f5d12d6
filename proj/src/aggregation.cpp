#include "maturity/aggregation.hpp"

#include <algorithm>
#include <cstdlib>
#include <tuple>

#include <fmt/format.h>

#include "maturity/error.hpp"

namespace maturity {

namespace {

struct Accumulator {
  std::int64_t sum = 0;
  std::size_t count = 0;
  std::size_t not_applicable = 0;

  void add(const ScoreValue& score) {
    if (score.is_numeric()) {
      sum += score.value();
      ++count;
    } else {
      ++not_applicable;
    }
  }

  AggregateCell cell() const {
    AggregateCell c;
    c.contributors = count;
    c.not_applicable = not_applicable;
    if (count > 0) c.average = Rational(sum, static_cast<std::int64_t>(count));
    return c;
  }

  std::optional<Rational> average() const {
    if (count == 0) return std::nullopt;
    return Rational(sum, static_cast<std::int64_t>(count));
  }
};

std::vector<const Response*> select_responses(const Assessment& a, std::optional<std::string_view> system_id) {
  if (system_id) {
    if (a.scope != ScopeMode::PerSystem) {
      throw Error(ErrorCode::ScopeUnsupported, "a system filter needs a per-system assessment",
                  {std::string(*system_id)});
    }
    if (!a.find_system(*system_id)) {
      throw Error(ErrorCode::UnknownSystem, fmt::format("unknown system '{}'", *system_id),
                  {std::string(*system_id)});
    }
  }
  std::vector<const Response*> out;
  for (const auto& [key, r] : a.responses) {
    if (!system_id || r.system_id == *system_id) out.push_back(&r);
  }
  return out;
}

// Pillars a target contributes to. Topics use the union over their statements.
bool target_in_pillar(const Questionnaire& q, const std::string& target, Pillar p) {
  if (const Statement* s = q.find_statement(target)) return s->has_pillar(p);
  for (const auto& t : q.topics()) {
    if (std::to_string(t.id) == target) {
      return std::any_of(t.statements.begin(), t.statements.end(),
                         [p](const Statement& s) { return s.has_pillar(p); });
    }
  }
  return false;
}

PillarScores pillar_scores(const std::vector<const Response*>& selected, const Questionnaire& q) {
  std::array<Accumulator, 4> acc{};
  Accumulator overall;
  for (const Response* r : selected) {
    overall.add(r->score);
    for (Pillar p : kAllPillars) {
      if (target_in_pillar(q, r->target, p)) acc[static_cast<std::size_t>(p)].add(r->score);
    }
  }
  PillarScores out;
  for (std::size_t i = 0; i < acc.size(); ++i) out.pillars[i] = acc[i].cell();
  out.overall = overall.average();
  return out;
}

}  // namespace

PillarScores aggregate_by_pillar(const Assessment& a, const Questionnaire& q, std::optional<std::string_view> system_id) {
  auto selected = select_responses(a, system_id);
  if (selected.empty()) throw Error(ErrorCode::NoData, "no answered targets to aggregate");
  return pillar_scores(selected, q);
}

DimensionScores aggregate_by_dimension(const Assessment& a, const Questionnaire& q,
                                       std::optional<std::string_view> system_id) {
  if (a.granularity != GranularityMode::StatementLevel) {
    throw Error(ErrorCode::GranularityUnsupported,
                "dimension aggregation needs individually scored statements; this assessment is topic-level");
  }
  auto selected = select_responses(a, system_id);
  if (selected.empty()) throw Error(ErrorCode::NoData, "no answered targets to aggregate");

  std::array<Accumulator, 9> acc{};
  Accumulator overall;
  for (const Response* r : selected) {
    const Statement* s = q.find_statement(r->target);
    if (!s) continue;
    overall.add(r->score);
    for (Dimension d : kAllDimensions) {
      if (s->has_dimension(d)) acc[static_cast<std::size_t>(d)].add(r->score);
    }
  }
  DimensionScores out;
  for (std::size_t i = 0; i < acc.size(); ++i) out.dimensions[i] = acc[i].cell();
  out.overall = overall.average();
  return out;
}

SystemRollup aggregate_across_systems(const Assessment& a, const Questionnaire& q) {
  if (a.scope != ScopeMode::PerSystem) {
    throw Error(ErrorCode::ScopeUnsupported, "holistic assessments are already organization-level");
  }
  if (a.responses.empty()) throw Error(ErrorCode::NoData, "no answered targets to aggregate");

  SystemRollup rollup;
  std::array<Rational, 4> sums{};
  std::array<std::int64_t, 4> systems_with_data{};
  Rational overall_sum = 0;
  std::int64_t overall_count = 0;
  for (const auto& sys : a.systems) {
    PillarScores scores = pillar_scores(select_responses(a, sys.system_id), q);
    for (Pillar p : kAllPillars) {
      const auto i = static_cast<std::size_t>(p);
      rollup.organization.pillars[i].not_applicable += scores[p].not_applicable;
      if (scores[p].average) {
        sums[i] += *scores[p].average;
        ++systems_with_data[i];
      }
    }
    if (scores.overall) {
      overall_sum += *scores.overall;
      ++overall_count;
    }
    rollup.per_system.emplace_back(sys.system_id, std::move(scores));
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    auto& cell = rollup.organization.pillars[i];
    cell.contributors = static_cast<std::size_t>(systems_with_data[i]);
    if (systems_with_data[i] > 0) cell.average = sums[i] / systems_with_data[i];
  }
  if (overall_count > 0) rollup.organization.overall = overall_sum / overall_count;
  return rollup;
}

std::string_view to_string(DiagnosticKind kind) noexcept {
  return kind == DiagnosticKind::EthicsWashingPattern ? "EthicsWashingPattern" : "IllInformedRiskManagement";
}

namespace {

bool at_least(const AggregateCell& c, double threshold) {
  return c.average && boost::rational_cast<double>(*c.average) >= threshold;
}

bool at_most(const AggregateCell& c, double threshold) {
  return c.average && boost::rational_cast<double>(*c.average) <= threshold;
}

std::string describe(const PillarScores& s) {
  std::string out;
  for (Pillar p : kAllPillars) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{} {}", to_string(p), s[p].average ? format_decimal(*s[p].average) : "no data");
  }
  return out;
}

}  // namespace

std::vector<DiagnosticFlag> detect_patterns(const PillarScores& s, const DiagnosticThresholds& t) {
  std::vector<DiagnosticFlag> flags;
  const auto& map = s[Pillar::Map];
  const auto& measure = s[Pillar::Measure];
  const auto& manage = s[Pillar::Manage];
  const auto& govern = s[Pillar::Govern];

  if (at_least(govern, t.high) && at_most(map, t.low) && at_most(measure, t.low) && at_most(manage, t.low)) {
    flags.push_back({DiagnosticKind::EthicsWashingPattern,
                     fmt::format("GOVERN >= {} while MAP, MEASURE and MANAGE <= {} ({})", t.high, t.low, describe(s)),
                     t});
  }
  if (at_least(govern, t.high) && at_least(manage, t.high) && at_most(map, t.low) && at_most(measure, t.low)) {
    flags.push_back({DiagnosticKind::IllInformedRiskManagement,
                     fmt::format("GOVERN and MANAGE >= {} while MAP and MEASURE <= {} ({})", t.high, t.low,
                                 describe(s)),
                     t});
  }
  return flags;
}

std::vector<TrajectoryPoint> trajectory(const std::vector<Assessment>& assessments, const Questionnaire& q) {
  std::vector<TrajectoryPoint> points;
  if (assessments.empty()) return points;
  const std::string& org = assessments.front().organization.id;
  for (const auto& a : assessments) {
    if (a.organization.id != org) {
      throw Error(ErrorCode::MixedOrganizations,
                  fmt::format("assessments belong to organizations '{}' and '{}'", org, a.organization.id),
                  {org, a.organization.id});
    }
  }
  for (const auto& a : assessments) {
    TrajectoryPoint p;
    p.assessment_id = a.assessment_id;
    p.as_of = a.effective_as_of();
    p.questionnaire_version = a.questionnaire_version;
    if (!a.responses.empty()) {
      p.pillars = a.scope == ScopeMode::PerSystem ? aggregate_across_systems(a, q).organization
                                                  : aggregate_by_pillar(a, q);
      if (a.granularity == GranularityMode::StatementLevel) p.dimensions = aggregate_by_dimension(a, q);
    }
    points.push_back(std::move(p));
  }
  std::sort(points.begin(), points.end(), [](const TrajectoryPoint& x, const TrajectoryPoint& y) {
    return std::tie(x.as_of, x.assessment_id) < std::tie(y.as_of, y.assessment_id);
  });
  return points;
}

std::string format_decimal(const Rational& value, int places) {
  std::int64_t scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational magnitude = negative ? -value : value;
  const std::int64_t num = magnitude.numerator() * scale;
  const std::int64_t den = magnitude.denominator();
  std::int64_t quotient = num / den;
  const std::int64_t twice_remainder = 2 * (num % den);
  if (twice_remainder > den || (twice_remainder == den && quotient % 2 == 1)) ++quotient;

  std::string digits = std::to_string(quotient / scale);
  if (places > 0) {
    digits += fmt::format(".{:0{}}", quotient % scale, places);
  }
  return (negative && quotient != 0 ? "-" : "") + digits;
}

}  // namespace maturity
