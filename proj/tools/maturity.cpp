// Command-line front end over AssessmentService; see `maturity --help`.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "maturity/codec.hpp"
#include "maturity/config.hpp"
#include "maturity/error.hpp"
#include "maturity/http_api.hpp"
#include "maturity/service.hpp"

namespace fs = std::filesystem;
using namespace maturity;
using codec::json;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, fmt::format("cannot open {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::StorageError, fmt::format("cannot write {}", path.string()));
  out << text;
}

// An assessment document (envelope) or a bare assessment object.
Assessment assessment_from_file(const std::string& path) {
  const std::string text = read_text(path);
  const json j = codec::parse(text);
  if (j.is_object() && j.contains("format_version")) return decode_document(text).assessment;
  return codec::assessment_from_json(j);
}

EvidenceItem parse_evidence_flag(const std::string& flag) {
  // KIND|DESCRIPTION[|SOURCE;SOURCE...]
  const auto first = flag.find('|');
  if (first == std::string::npos) {
    throw Error(ErrorCode::ValidationError, fmt::format("--evidence '{}' must look like KIND|DESCRIPTION[|SOURCES]", flag));
  }
  EvidenceItem e;
  auto kind = parse_evidence_kind(flag.substr(0, first));
  if (!kind) {
    throw Error(ErrorCode::ValidationError,
                fmt::format("unknown evidence kind '{}' (supports, absence, none-found, na)", flag.substr(0, first)));
  }
  e.kind = *kind;
  const auto second = flag.find('|', first + 1);
  e.description = flag.substr(first + 1, second == std::string::npos ? std::string::npos : second - first - 1);
  if (second != std::string::npos) {
    std::stringstream ss(flag.substr(second + 1));
    std::string source;
    while (std::getline(ss, source, ';')) {
      if (!source.empty()) e.sources.push_back(source);
    }
  }
  return e;
}

AISystemProfile parse_system_flag(const std::string& flag) {
  // ID:STAGE[:NAME]
  const auto first = flag.find(':');
  if (first == std::string::npos) {
    throw Error(ErrorCode::ValidationError, fmt::format("--system '{}' must look like ID:STAGE[:NAME]", flag));
  }
  AISystemProfile s;
  s.system_id = flag.substr(0, first);
  const auto second = flag.find(':', first + 1);
  const std::string stage_text = flag.substr(first + 1, second == std::string::npos ? std::string::npos : second - first - 1);
  auto stage = parse_stage(stage_text);
  if (!stage) throw Error(ErrorCode::ValidationError, fmt::format("unknown stage '{}' (plan, build, deploy)", stage_text));
  s.stage = *stage;
  s.name = second == std::string::npos ? s.system_id : flag.substr(second + 1);
  return s;
}

MetricRating require_rating(const std::string& text, const char* flag) {
  auto r = parse_rating(text);
  if (!r) throw Error(ErrorCode::ValidationError, fmt::format("{} must be L, M or H", flag));
  return *r;
}

std::optional<std::string_view> opt_view(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::string_view(s);
}

struct Cli {
  std::string config_path;
  std::string store_path;
  std::string questionnaire_path;

  Config config;
  std::optional<Questionnaire> questionnaire;
  std::optional<FileStore> store;
  std::optional<AssessmentService> service;

  void setup() {
    config = load_config(config_path.empty() ? std::nullopt : std::optional<std::string>(config_path));
    if (!store_path.empty()) config.store_path = store_path;
    if (!questionnaire_path.empty()) config.questionnaire_path = questionnaire_path;
  }

  const Questionnaire& q() {
    if (!questionnaire) {
      questionnaire = config.questionnaire_path ? load_questionnaire_file(*config.questionnaire_path)
                                                : bundled_questionnaire();
    }
    return *questionnaire;
  }

  AssessmentService& svc() {
    if (!service) {
      store.emplace(config.store_path);
      ServiceOptions options;
      options.diagnostics = config.diagnostics;
      options.coverage = config.coverage;
      service.emplace(q(), *store, options);
    }
    return *service;
  }

  // --id against the store, or --file for a standalone document.
  Assessment resolve(const std::string& id, const std::string& file) {
    if (!file.empty()) return assessment_from_file(file);
    if (id.empty()) throw Error(ErrorCode::ValidationError, "pass --id or --file");
    return svc().get(id);
  }
};

void print_score_table(const Assessment& a) {
  for (const auto& [key, r] : a.responses) {
    std::string ratings = "N/A";
    if (r.metrics) {
      ratings = fmt::format("{}{}{}", to_letter(r.metrics->coverage), to_letter(r.metrics->robustness),
                            to_letter(r.metrics->input_diversity));
    }
    std::cout << fmt::format("{:<4} {:<12} {:<4} score: {}\n", r.target, r.system_id.value_or("-"), ratings,
                             r.score.to_string());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maturity assessment engine: questionnaire, scoring, aggregation and reports"};
  app.require_subcommand(1);
  Cli cli;
  app.add_option("--config", cli.config_path, "JSON config file");
  app.add_option("--store", cli.store_path, "Assessment store directory");
  app.add_option("--questionnaire", cli.questionnaire_path, "Questionnaire data file (defaults to the bundled one)");

  std::function<void()> action;

  // init
  auto* init = app.add_subcommand("init", "Create an assessment");
  std::string org_id, org_name, scope_text = "holistic", granularity_text = "topic", new_id, as_of_text;
  std::vector<std::string> system_flags;
  bool init_json = false;
  init->add_option("--org", org_id, "Organization id")->required();
  init->add_option("--org-name", org_name, "Organization display name");
  init->add_option("--scope", scope_text, "holistic | per-system");
  init->add_option("--granularity", granularity_text, "topic | statement");
  init->add_option("--system", system_flags, "ID:STAGE[:NAME], stage in plan|build|deploy")->required();
  init->add_option("--id", new_id, "Assessment id (generated when omitted)");
  init->add_option("--as-of", as_of_text, "As-of date for trajectories (YYYY-MM-DD)");
  init->add_flag("--json", init_json, "Print the stored assessment");
  init->callback([&] {
    action = [&] {
      AssessmentSpec spec;
      spec.assessment_id = new_id;
      spec.organization = {org_id, org_name.empty() ? org_id : org_name};
      auto scope = parse_scope(scope_text);
      if (!scope) throw Error(ErrorCode::ValidationError, "--scope must be holistic or per-system");
      spec.scope = *scope;
      auto granularity = parse_granularity(granularity_text);
      if (!granularity) throw Error(ErrorCode::ValidationError, "--granularity must be topic or statement");
      spec.granularity = *granularity;
      for (const auto& f : system_flags) spec.systems.push_back(parse_system_flag(f));
      if (!as_of_text.empty()) {
        spec.as_of = parse_timestamp(as_of_text);
        if (!spec.as_of) throw Error(ErrorCode::ValidationError, "--as-of must be YYYY-MM-DD");
      }
      const Assessment a = cli.svc().create(spec);
      if (init_json) {
        std::cout << codec::to_json(a).dump(2) << "\n";
      } else {
        std::cout << fmt::format("assessment: {}\nrevision: {}\n", a.assessment_id, a.revision);
      }
    };
  });

  // targets
  auto* targets = app.add_subcommand("targets", "List applicable targets");
  std::string t_id, t_file, t_system;
  targets->add_option("--id", t_id, "Assessment id");
  targets->add_option("--file", t_file, "Assessment document file");
  targets->add_option("--system", t_system, "System id (per-system assessments)");
  targets->callback([&] {
    action = [&] {
      const Assessment a = cli.resolve(t_id, t_file);
      const auto list = applicable_targets(a, cli.q(), opt_view(t_system));
      for (const auto& t : list) std::cout << t << "\n";
      std::cout << fmt::format("{} targets\n", list.size());
    };
  });

  // respond
  auto* respond = app.add_subcommand("respond", "Record one response");
  std::string r_id, r_target, r_system, r_cov, r_rob, r_div, r_note;
  std::vector<std::string> r_evidence, r_facets;
  bool r_na = false;
  std::int64_t r_expected = -1;
  respond->add_option("--id", r_id, "Assessment id")->required();
  respond->add_option("--target", r_target, "Topic id (e.g. 4) or statement id (e.g. 4e)")->required();
  respond->add_option("--system", r_system, "System id (per-system assessments)");
  respond->add_option("--coverage", r_cov, "L | M | H");
  respond->add_option("--robustness", r_rob, "L | M | H");
  respond->add_option("--input-diversity", r_div, "L | M | H");
  respond->add_flag("--na", r_na, "Mark the target not applicable");
  respond->add_option("--evidence", r_evidence, "KIND|DESCRIPTION[|SOURCE;SOURCE], kind in supports|absence|none-found|na");
  respond->add_option("--facet", r_facets, "Robustness facet observed (regular, systematic, ...)");
  respond->add_option("--note", r_note, "Rationale");
  respond->add_option("--expected-revision", r_expected, "Fail unless the stored revision matches");
  respond->callback([&] {
    action = [&] {
      ResponseInput in;
      in.target = r_target;
      if (!r_system.empty()) in.system_id = r_system;
      const bool any_metric = !r_cov.empty() || !r_rob.empty() || !r_div.empty();
      if (r_na && any_metric) throw Error(ErrorCode::ValidationError, "--na excludes metric ratings");
      if (!r_na) {
        if (r_cov.empty() || r_rob.empty() || r_div.empty()) {
          throw Error(ErrorCode::ValidationError, "give --coverage, --robustness and --input-diversity, or --na");
        }
        MetricAssessment m;
        m.coverage = require_rating(r_cov, "--coverage");
        m.robustness = require_rating(r_rob, "--robustness");
        m.input_diversity = require_rating(r_div, "--input-diversity");
        if (!r_facets.empty()) {
          RobustnessFacets f;
          for (const auto& name : r_facets) {
            if (!set_facet(f, name, true)) throw Error(ErrorCode::ValidationError, fmt::format("unknown facet '{}'", name));
          }
          m.robustness_facets = f;
        }
        in.metrics = m;
      }
      for (const auto& e : r_evidence) in.evidence.push_back(parse_evidence_flag(e));
      in.note = r_note;
      const std::int64_t expected = r_expected >= 0 ? r_expected : cli.svc().get(r_id).revision;
      const Assessment a = cli.svc().respond(r_id, expected, in);
      const Response& stored = a.responses.at({in.target, in.system_id.value_or("")});
      std::cout << fmt::format("score: {}\nrevision: {}\n", stored.score.to_string(), a.revision);
    };
  });

  // import
  auto* import = app.add_subcommand("import", "Record responses in bulk from a JSON file");
  std::string i_id, i_file;
  std::int64_t i_expected = -1;
  import->add_option("--id", i_id, "Assessment id")->required();
  import->add_option("--file", i_file, "Response array (same shape as an assessment's responses)")->required();
  import->add_option("--expected-revision", i_expected, "Fail unless the stored revision matches");
  import->callback([&] {
    action = [&] {
      const auto inputs = codec::response_inputs_from_json(codec::parse(read_text(i_file)));
      const std::int64_t expected = i_expected >= 0 ? i_expected : cli.svc().get(i_id).revision;
      const Assessment a = cli.svc().import_responses(i_id, expected, inputs);
      std::cout << fmt::format("imported: {}\nrevision: {}\n", inputs.size(), a.revision);
    };
  });

  // score
  auto* score = app.add_subcommand("score", "Recompute and show per-target scores");
  std::string s_id, s_file;
  score->add_option("--id", s_id, "Assessment id");
  score->add_option("--file", s_file, "Assessment document file (read-only)");
  score->callback([&] {
    action = [&] {
      if (!s_file.empty()) {
        Assessment a = assessment_from_file(s_file);
        const auto changed = rescore(a);
        print_score_table(a);
        std::cout << fmt::format("{} stale scores\n", changed.size());
        return;
      }
      if (s_id.empty()) throw Error(ErrorCode::ValidationError, "pass --id or --file");
      const auto result = cli.svc().rescore(s_id);
      print_score_table(result.assessment);
      std::cout << fmt::format("{} stale scores corrected\n", result.corrected.size());
    };
  });

  // aggregate
  auto* aggregate = app.add_subcommand("aggregate", "Pillar or dimension aggregates (JSON)");
  std::string a_id, a_file, a_mode = "pillar", a_system;
  aggregate->add_option("--id", a_id, "Assessment id");
  aggregate->add_option("--file", a_file, "Assessment document file");
  aggregate->add_option("--mode", a_mode, "pillar | dimension");
  aggregate->add_option("--system", a_system, "System id");
  aggregate->callback([&] {
    action = [&] {
      auto mode = parse_aggregation_mode(a_mode);
      if (!mode) throw Error(ErrorCode::ValidationError, "--mode must be pillar or dimension");
      const Assessment a = cli.resolve(a_id, a_file);
      std::cout << aggregates_json(a, cli.q(), *mode, opt_view(a_system)).dump(2) << "\n";
    };
  });

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Detect pillar patterns");
  std::string d_id, d_file, d_system;
  diagnose->add_option("--id", d_id, "Assessment id");
  diagnose->add_option("--file", d_file, "Assessment document file");
  diagnose->add_option("--system", d_system, "System id");
  diagnose->callback([&] {
    action = [&] {
      const Assessment a = cli.resolve(d_id, d_file);
      const auto flags = diagnostics_for(a, cli.q(), opt_view(d_system), cli.config.diagnostics);
      if (flags.empty()) std::cout << "no patterns detected\n";
      for (const auto& f : flags) std::cout << fmt::format("{}: {}\n", to_string(f.kind), f.rationale);
    };
  });

  // report
  auto* report = app.add_subcommand("report", "Write report.md and chart-data.json");
  std::string p_id, p_file, p_out;
  report->add_option("--id", p_id, "Assessment id");
  report->add_option("--file", p_file, "Assessment document file");
  report->add_option("--out", p_out, "Output directory")->required();
  report->callback([&] {
    action = [&] {
      const Assessment a = cli.resolve(p_id, p_file);
      const ReportBundle bundle = render_report(a, cli.q(), compute_report_inputs(a, cli.q(), cli.config.diagnostics));
      fs::create_directories(p_out);
      write_text(fs::path(p_out) / "report.md", bundle.markdown);
      write_text(fs::path(p_out) / "chart-data.json", bundle.chart_data.dump(2) + "\n");
      std::cout << fmt::format("wrote {}/report.md and {}/chart-data.json\n", p_out, p_out);
    };
  });

  // trajectory
  auto* traj = app.add_subcommand("trajectory", "Pillar profile over time for one organization (JSON)");
  std::string tr_org;
  traj->add_option("--org", tr_org, "Organization id")->required();
  traj->callback([&] {
    action = [&] {
      std::cout << json{{"organization_id", tr_org}, {"points", codec::to_json(cli.svc().trajectory(tr_org))}}.dump(2)
                << "\n";
    };
  });

  // validate
  auto* validate = app.add_subcommand("validate", "Validate a questionnaire or assessment file");
  std::string v_questionnaire, v_assessment;
  validate->add_option("--questionnaire-file", v_questionnaire, "Questionnaire data file");
  validate->add_option("--assessment-file", v_assessment, "Assessment document file");
  validate->callback([&] {
    action = [&] {
      if (!v_assessment.empty()) {
        const Assessment a = assessment_from_file(v_assessment);
        const auto problems = check_assessment(a, cli.q());
        for (const auto& p : problems) std::cerr << p << "\n";
        if (!problems.empty()) {
          throw Error(ErrorCode::ValidationError, fmt::format("{} problems in {}", problems.size(), v_assessment));
        }
        std::cout << fmt::format("assessment {} ok: {} responses, revision {}\n", a.assessment_id, a.responses.size(),
                                 a.revision);
        return;
      }
      const Questionnaire q = v_questionnaire.empty() ? cli.q() : load_questionnaire_file(v_questionnaire);
      std::cout << fmt::format("questionnaire {}: {} topics, {} statements\n", q.version(), q.topics().size(),
                               q.statement_count());
    };
  });

  // list / show
  auto* list = app.add_subcommand("list", "List stored assessments");
  std::string l_org;
  list->add_option("--org", l_org, "Organization id");
  list->callback([&] {
    action = [&] {
      for (const auto& s : cli.svc().store().list(opt_view(l_org))) {
        std::cout << fmt::format("{}  org={}  rev={}  {} {}  responses={}\n", s.assessment_id, s.organization.id,
                                 s.revision, to_string(s.scope), to_string(s.granularity), s.response_count);
      }
    };
  });

  auto* show = app.add_subcommand("show", "Print a stored assessment document");
  std::string sh_id;
  std::int64_t sh_revision = -1;
  show->add_option("--id", sh_id, "Assessment id")->required();
  show->add_option("--revision", sh_revision, "Specific revision");
  show->callback([&] {
    action = [&] {
      const auto doc = cli.svc().document(sh_id, sh_revision >= 0 ? std::optional<std::int64_t>(sh_revision) : std::nullopt);
      std::cout << encode_document(doc);
    };
  });

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  std::string listen, token, ui_dir;
  serve_cmd->add_option("--listen", listen, "host:port");
  serve_cmd->add_option("--token", token, "Require this bearer token");
  serve_cmd->add_option("--ui-dir", ui_dir, "Static UI bundle to serve at /");
  serve_cmd->callback([&] {
    action = [&] {
      if (!listen.empty()) apply_listen(cli.config, listen);
      if (!token.empty()) cli.config.bearer_token = token;
      if (!ui_dir.empty()) cli.config.ui_dir = ui_dir;
      maturity::serve(cli.config);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    cli.setup();
    if (action) action();
  } catch (const Error& e) {
    std::cerr << fmt::format("error: {}: {}\n", e.machine_code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("error: INTERNAL_ERROR: {}\n", e.what());
    return 1;
  }
  return 0;
}
