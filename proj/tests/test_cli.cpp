#include <doctest.h>

#include "cli_runner.hpp"
#include "maturity/codec.hpp"
#include "maturity/store.hpp"
#include "support.hpp"

using namespace testing;
using maturity::codec::json;

namespace {

struct Session {
  TempDir dir;
  std::filesystem::path store = dir.path() / "store";
  std::filesystem::path scratch = dir.path();

  CliResult run(const std::vector<std::string>& args) { return run_cli(MATURITY_CLI, store, args, scratch); }
};

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("validate the bundled questionnaire") {
  Session s;
  const auto r = s.run({"validate"});
  CHECK(r.exit_code == 0);
  CHECK(has(r.out, "9 topics, 59 statements"));
}

TEST_CASE("init, respond, score, aggregate, report") {
  Session s;
  auto r = s.run({"init", "--org", "acme", "--system", "chat:deploy:Chat assistant", "--id", "a1"});
  REQUIRE(r.exit_code == 0);
  CHECK(has(r.out, "assessment: a1"));

  r = s.run({"targets", "--id", "a1"});
  CHECK(has(r.out, "9 targets"));

  r = s.run({"respond", "--id", "a1", "--target", "4", "--coverage", "H", "--robustness", "M", "--input-diversity",
             "L", "--evidence", "supports|validity section describes goals|standards.pdf;p.4", "--facet", "regular"});
  CHECK(r.exit_code == 0);
  CHECK(has(r.out, "score: 3"));
  CHECK(has(r.out, "revision: 2"));

  r = s.run({"respond", "--id", "a1", "--target", "9", "--na", "--evidence", "na|system not yet monitored in production"});
  CHECK(r.exit_code == 0);
  CHECK(has(r.out, "score: N/A"));

  r = s.run({"score", "--id", "a1"});
  CHECK(r.exit_code == 0);
  CHECK(has(r.out, "HML"));
  CHECK(has(r.out, "0 stale scores corrected"));

  r = s.run({"aggregate", "--id", "a1", "--mode", "pillar"});
  REQUIRE(r.exit_code == 0);
  const json agg = json::parse(r.out);
  CHECK(agg["pillars"]["axes"][1]["average"] == 3.0);

  r = s.run({"aggregate", "--id", "a1", "--mode", "dimension"});
  CHECK(r.exit_code == 1);
  CHECK(has(r.err, "error: GRANULARITY_UNSUPPORTED"));

  r = s.run({"diagnose", "--id", "a1"});
  CHECK(has(r.out, "no patterns detected"));

  const auto out_dir = s.dir.path() / "out";
  r = s.run({"report", "--id", "a1", "--out", out_dir.string()});
  CHECK(r.exit_code == 0);
  CHECK(has(read_all(out_dir / "report.md"), "[3](#ev-4)"));
  CHECK(json::parse(read_all(out_dir / "chart-data.json"))["assessment_id"] == "a1");

  r = s.run({"list"});
  CHECK(has(r.out, "a1  org=acme  rev=3"));

  r = s.run({"show", "--id", "a1", "--revision", "2"});
  CHECK(r.exit_code == 0);
  CHECK(maturity::decode_document(r.out).assessment.revision == 2);

  r = s.run({"trajectory", "--org", "acme"});
  CHECK(json::parse(r.out)["points"].size() == 1);
}

TEST_CASE("CLI error reporting") {
  Session s;
  s.run({"init", "--org", "acme", "--system", "draft:plan", "--id", "a1", "--granularity", "statement"});

  auto r = s.run({"respond", "--id", "a1", "--target", "1a", "--coverage", "H", "--robustness", "H",
                  "--input-diversity", "H"});
  CHECK(r.exit_code == 1);
  CHECK(has(r.err, "error: VALIDATION_ERROR: score without evidence"));

  r = s.run({"respond", "--id", "a1", "--target", "4a", "--coverage", "H", "--robustness", "H", "--input-diversity",
             "H", "--evidence", "supports|x"});
  CHECK(has(r.err, "INAPPLICABLE_TARGET"));

  r = s.run({"respond", "--id", "a1", "--target", "1a", "--coverage", "H", "--robustness", "H", "--input-diversity",
             "H", "--evidence", "supports|x", "--expected-revision", "5"});
  CHECK(has(r.err, "REVISION_CONFLICT"));

  r = s.run({"respond", "--id", "a1", "--target", "1a", "--coverage", "Q", "--robustness", "H", "--input-diversity",
             "H", "--evidence", "supports|x"});
  CHECK(has(r.err, "VALIDATION_ERROR"));

  r = s.run({"show", "--id", "nope"});
  CHECK(has(r.err, "NOT_FOUND"));

  r = s.run({"aggregate", "--id", "a1"});
  CHECK(has(r.err, "NO_DATA"));
}

TEST_CASE("import and file mode") {
  Session s;
  s.run({"init", "--org", "acme", "--system", "chat:build", "--id", "a1", "--granularity", "statement"});
  const auto file = s.dir.path() / "responses.json";
  std::ofstream(file) << R"([
    {"target": "4e", "metrics": {"coverage": "H", "robustness": "H", "input_diversity": "H"},
     "evidence": [{"kind": "SupportsActivity", "description": "bias audit"}], "score": 5},
    {"target": "7b", "metrics": {"coverage": "L", "robustness": "L", "input_diversity": "L"},
     "evidence": [{"kind": "IndicatesAbsence", "description": "no mitigation"}]}
  ])";
  auto r = s.run({"import", "--id", "a1", "--file", file.string()});
  CHECK(r.exit_code == 0);
  CHECK(has(r.out, "imported: 2"));

  const auto doc = s.dir.path() / "doc.json";
  std::ofstream(doc) << s.run({"show", "--id", "a1"}).out;
  r = s.run({"aggregate", "--file", doc.string(), "--mode", "dimension"});
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["dimensions"]["axes"][1]["average"] == 3.0);

  r = s.run({"validate", "--assessment-file", doc.string()});
  CHECK(r.exit_code == 0);

  std::string text = read_all(doc);
  text[text.find("\"score\": 5") + 9] = '4';
  std::ofstream(doc, std::ios::trunc) << text;
  r = s.run({"validate", "--assessment-file", doc.string()});
  CHECK(r.exit_code == 1);
  CHECK(has(r.err, "CORRUPT_DOCUMENT"));
}
