#include "maturity/report.hpp"

#include <fmt/format.h>

#include "maturity/codec.hpp"
#include "maturity/error.hpp"

namespace maturity {

using codec::json;

ReportInputs compute_report_inputs(const Assessment& a, const Questionnaire& q, const DiagnosticThresholds& thresholds) {
  ReportInputs in;
  in.completeness = completeness(a, q);
  if (a.responses.empty()) return in;
  if (a.scope == ScopeMode::PerSystem) {
    in.rollup = aggregate_across_systems(a, q);
    in.pillars = in.rollup->organization;
  } else {
    in.pillars = aggregate_by_pillar(a, q);
  }
  if (a.granularity == GranularityMode::StatementLevel) in.dimensions = aggregate_by_dimension(a, q);
  in.diagnostics = detect_patterns(*in.pillars, thresholds);
  return in;
}

std::string evidence_anchor(const Response& r) {
  std::string anchor = "ev-" + r.target;
  if (r.system_id) anchor += "--" + *r.system_id;
  return anchor;
}

namespace {

std::string target_title(const Questionnaire& q, const std::string& target) {
  if (const Statement* s = q.find_statement(target)) return fmt::format("Statement {}: {}", s->id, s->text);
  for (const auto& t : q.topics()) {
    if (std::to_string(t.id) == target) return fmt::format("Topic {}: {}. {}", t.id, t.name, t.summary);
  }
  return fmt::format("Target {}", target);
}

std::string cell_text(const AggregateCell& c) {
  return c.average ? format_decimal(*c.average) : std::string("no data");
}

std::string percent(const CompletenessEntry& e) {
  if (e.applicable == 0) return "0.00%";
  return format_decimal(Rational(static_cast<std::int64_t>(e.answered) * 100, static_cast<std::int64_t>(e.applicable))) + "%";
}

// Markdown table cells cannot hold raw pipes or newlines.
std::string escape_cell(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

void pillar_table(std::string& md, const PillarScores& s) {
  md += "| Pillar | Average | Contributors | N/A |\n|---|---|---|---|\n";
  for (Pillar p : kAllPillars) {
    md += fmt::format("| {} | {} | {} | {} |\n", to_string(p), cell_text(s[p]), s[p].contributors, s[p].not_applicable);
  }
}

json evidence_index(const Assessment& a) {
  json index = json::array();
  for (const auto& [key, r] : a.responses) {
    const std::string anchor = evidence_anchor(r);
    json items = json::array();
    for (std::size_t i = 0; i < r.evidence.size(); ++i) {
      json item = codec::to_json(r.evidence[i]);
      item["anchor"] = fmt::format("{}-{}", anchor, i + 1);
      items.push_back(std::move(item));
    }
    index.push_back({{"target", r.target},
                     {"system_id", r.system_id ? json(*r.system_id) : json(nullptr)},
                     {"score", r.score.is_numeric() ? json(r.score.value()) : json("N/A")},
                     {"anchor", anchor},
                     {"evidence", std::move(items)}});
  }
  return index;
}

}  // namespace

ReportBundle render_report(const Assessment& a, const Questionnaire& q, const ReportInputs& in) {
  ReportBundle bundle;
  std::string& md = bundle.markdown;

  md += fmt::format("# Maturity assessment: {} ({})\n\n", a.organization.name, a.organization.id);
  md += fmt::format("- Assessment: `{}` (revision {})\n", a.assessment_id, a.revision);
  md += fmt::format("- Questionnaire version: {}\n", a.questionnaire_version);
  md += fmt::format("- Scope: {}\n- Granularity: {}\n", to_string(a.scope), to_string(a.granularity));
  md += fmt::format("- As of: {}\n", format_timestamp(a.effective_as_of()));
  md += "- Systems:\n";
  for (const auto& s : a.systems) {
    md += fmt::format("  - `{}` {} ({})", s.system_id, s.name, to_string(s.stage));
    if (!s.description.empty()) md += ": " + s.description;
    md += "\n";
  }

  md += "\n## Completeness\n\n";
  md += fmt::format("Answered {} of {} applicable targets ({}).\n", in.completeness.overall.answered,
                    in.completeness.overall.applicable, percent(in.completeness.overall));
  for (const auto& e : in.completeness.per_system) {
    md += fmt::format("- `{}`: {} of {} ({})\n", e.system_id, e.answered, e.applicable, percent(e));
  }

  md += "\n## Scores\n\n";
  if (a.responses.empty()) {
    md += "No targets have been answered yet.\n";
  } else {
    md += "| Target | System | Score | Coverage | Robustness | Input diversity |\n|---|---|---|---|---|---|\n";
    for (const auto& [key, r] : a.responses) {
      const auto rating = [&](auto member) {
        return r.metrics ? std::string(to_string((*r.metrics).*member)) : std::string("-");
      };
      md += fmt::format("| {} | {} | [{}](#{}) | {} | {} | {} |\n", r.target, r.system_id.value_or("-"),
                        r.score.to_string(), evidence_anchor(r), rating(&MetricAssessment::coverage),
                        rating(&MetricAssessment::robustness), rating(&MetricAssessment::input_diversity));
    }
    for (const auto& [key, r] : a.responses) {
      md += fmt::format("\n### <a id=\"{}\"></a>{}", evidence_anchor(r), target_title(q, r.target));
      if (r.system_id) md += fmt::format(" [system `{}`]", *r.system_id);
      md += "\n\n";
      md += fmt::format("Score: **{}**", r.score.to_string());
      if (r.metrics) {
        md += fmt::format(" (coverage {}, robustness {}, input diversity {})", to_string(r.metrics->coverage),
                          to_string(r.metrics->robustness), to_string(r.metrics->input_diversity));
      } else {
        md += " (not applicable)";
      }
      md += "\n";
      if (r.metrics && r.metrics->robustness_facets) {
        std::string facets;
        for (auto name : kFacetNames) {
          if (get_facet(*r.metrics->robustness_facets, name)) facets += (facets.empty() ? "" : ", ") + std::string(name);
        }
        md += fmt::format("\nRobustness facets observed (informational): {}\n", facets.empty() ? "none" : facets);
      }
      md += "\nEvidence:\n\n";
      for (std::size_t i = 0; i < r.evidence.size(); ++i) {
        const auto& e = r.evidence[i];
        md += fmt::format("{}. <a id=\"{}-{}\"></a>**{}**: {}", i + 1, evidence_anchor(r), i + 1, to_string(e.kind),
                          e.description);
        if (!e.sources.empty()) {
          std::string sources;
          for (const auto& s : e.sources) sources += (sources.empty() ? "" : "; ") + s;
          md += fmt::format(" (sources: {})", sources);
        }
        md += "\n";
      }
      if (!r.note.empty()) md += fmt::format("\nRationale: {}\n", escape_cell(r.note));
      md += fmt::format("\nRecorded at {}\n", format_timestamp(r.recorded_at));
    }
  }

  json chart;
  chart["assessment_id"] = a.assessment_id;
  chart["revision"] = a.revision;
  chart["organization"] = {{"id", a.organization.id}, {"name", a.organization.name}};
  chart["scope"] = to_string(a.scope);
  chart["granularity"] = to_string(a.granularity);
  chart["completeness"] = codec::to_json(in.completeness);
  chart["diagnostics"] = codec::to_json(in.diagnostics);
  chart["evidence_index"] = evidence_index(a);

  if (in.pillars) {
    md += "\n## Aggregates\n\n### By pillar\n\n";
    pillar_table(md, *in.pillars);
    if (in.pillars->overall) {
      md += fmt::format("\nOverall ({}): {}\n",
                        a.scope == ScopeMode::PerSystem ? "unweighted mean of the per-system overall scores"
                                                        : "unweighted mean of answered target scores",
                        format_decimal(*in.pillars->overall));
    }
    json aggregates;
    aggregates["pillar_chart"] = codec::to_json(*in.pillars);
    aggregates["pillar_chart"]["available"] = true;

    md += "\n### By dimension\n\n";
    if (in.dimensions) {
      md += "| Dimension | Average | Contributors | N/A |\n|---|---|---|---|\n";
      for (Dimension d : kAllDimensions) {
        const auto& c = (*in.dimensions)[d];
        md += fmt::format("| {} | {} | {} | {} |\n", to_string(d), cell_text(c), c.contributors, c.not_applicable);
      }
      aggregates["dimension_chart"] = codec::to_json(*in.dimensions);
      aggregates["dimension_chart"]["available"] = true;
    } else {
      md += fmt::format("Unavailable. {}\n", kDimensionUnavailableReason);
      aggregates["dimension_chart"] = {{"available", false}, {"reason", kDimensionUnavailableReason}};
    }

    if (in.rollup) {
      md += "\n### Per system\n";
      for (const auto& [id, scores] : in.rollup->per_system) {
        md += fmt::format("\n#### `{}`\n\n", id);
        pillar_table(md, scores);
      }
      aggregates["per_system"] = codec::to_json(*in.rollup)["per_system"];
    } else {
      aggregates["per_system"] = nullptr;
    }
    chart["aggregates"] = std::move(aggregates);

    md += "\n## Diagnostics\n\n";
    if (in.diagnostics.empty()) {
      md += "No pattern detected.\n";
    } else {
      for (const auto& f : in.diagnostics) md += fmt::format("- **{}**: {}\n", to_string(f.kind), f.rationale);
    }
  } else {
    chart["aggregates"] = nullptr;
  }
  bundle.chart_data = std::move(chart);
  return bundle;
}

}  // namespace maturity
