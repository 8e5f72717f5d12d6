#include <doctest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "maturity/codec.hpp"
#include "maturity/error.hpp"
#include "maturity/store.hpp"
#include "support.hpp"

using namespace maturity;
using namespace testing;
namespace fs = std::filesystem;

namespace {

const Questionnaire& Q() { return bundled_questionnaire(); }

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::StorageError;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

Assessment rich_assessment() {
  Assessment a = fresh(GranularityMode::StatementLevel);
  ResponseInput in = scored("4e", "HML");
  in.metrics->robustness_facets = RobustnessFacets{true, false, true, false, false, true};
  in.evidence.push_back({EvidenceKind::IndicatesAbsence, "no bias audit \"published\" é", {"a", "b"}});
  in.note = "line one\nline two";
  a = record_response(a, in, Q(), at("2024-01-02T03:04:05Z"));
  a = record_response(a, not_applicable("4k"), Q(), at("2024-01-03"));
  a.as_of = at("2023-12-31");
  return a;
}

}  // namespace

TEST_CASE("document encode/decode round trip") {
  const Assessment a = rich_assessment();
  const AssessmentDocument doc = make_document(a, {{1, "sha256:00", at("2024-01-01")}});
  CHECK(doc.checksum.rfind("sha256:", 0) == 0);
  CHECK(doc.checksum.size() == 7 + 64);
  const std::string bytes = encode_document(doc);
  const AssessmentDocument back = decode_document(bytes);
  CHECK(back == doc);
  CHECK(encode_document(back) == bytes);
  CHECK(codec::canonical(codec::to_json(back.assessment)) == codec::canonical(codec::to_json(a)));
}

TEST_CASE("store save and load") {
  TempDir dir;
  FileStore store(dir.path());
  Assessment a = rich_assessment();
  a.revision = 1;
  CHECK(store.save(a, 0) == 1);
  CHECK(store.exists(a.assessment_id));
  CHECK_FALSE(store.exists("missing"));
  CHECK(store.load(a.assessment_id).assessment == a);
  CHECK(fs::exists(dir.path() / "acme" / (a.assessment_id + ".json")));

  Assessment b = record_response(a, scored("1a", "MMM"), Q(), at("2024-02-01"));
  CHECK(store.save(b, 1) == 2);
  const AssessmentDocument doc = store.load(a.assessment_id);
  CHECK(doc.assessment == b);
  REQUIRE(doc.history.size() == 1);
  CHECK(doc.history[0].revision == 1);
  CHECK(store.load(a.assessment_id, 1).assessment == a);
  CHECK(error_of([&] { store.load(a.assessment_id, 7); }) == ErrorCode::NotFound);
  CHECK(error_of([&] { store.load("missing"); }) == ErrorCode::NotFound);

  // Stale writer.
  CHECK(error_of([&] { store.save(b, 1); }) == ErrorCode::RevisionConflict);
  // Revision must move forward.
  CHECK(error_of([&] { store.save(b, 2); }) == ErrorCode::ValidationError);

  const auto summaries = store.list();
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].revision == 2);
  CHECK(summaries[0].response_count == 3);
  CHECK(store.list("other").empty());
  CHECK(store.load_organization("acme").size() == 1);
}

TEST_CASE("ids are restricted") {
  TempDir dir;
  FileStore store(dir.path());
  Assessment a = fresh(GranularityMode::TopicLevel);
  a.assessment_id = "../escape";
  CHECK(error_of([&] { store.save(a, 0); }) == ErrorCode::ValidationError);
  CHECK(is_safe_id("acme-2024.v1_x"));
  CHECK_FALSE(is_safe_id(""));
  CHECK_FALSE(is_safe_id(".hidden"));
  CHECK_FALSE(is_safe_id("a/b"));
}

TEST_CASE("the same id under another organization conflicts") {
  TempDir dir;
  FileStore store(dir.path());
  Assessment a = fresh(GranularityMode::TopicLevel);
  store.save(a, 0);
  a.organization = {"other", "Other"};
  CHECK(error_of([&] { store.save(a, 0); }) == ErrorCode::RevisionConflict);
}

TEST_CASE("concurrent saves from the same revision: exactly one wins") {
  TempDir dir;
  FileStore store(dir.path());
  const Assessment base = fresh(GranularityMode::TopicLevel);
  store.save(base, 0);
  for (int round = 0; round < 20; ++round) {
    const Assessment current = store.load(base.assessment_id).assessment;
    constexpr int kWriters = 4;
    std::array<int, kWriters> outcome{};  // 1 = saved, 2 = conflict, 3 = other
    std::vector<std::thread> threads;
    for (int i = 0; i < kWriters; ++i) {
      threads.emplace_back([&, i] {
        FileStore own(dir.path());
        const Assessment next =
            record_response(current, scored(std::to_string(i + 1), "HML"), Q(), at("2024-01-05"));
        try {
          own.save(next, current.revision);
          outcome[i] = 1;
        } catch (const Error& e) {
          outcome[i] = e.code() == ErrorCode::RevisionConflict ? 2 : 3;
        }
      });
    }
    for (auto& t : threads) t.join();
    CHECK(std::count(outcome.begin(), outcome.end(), 1) == 1);
    CHECK(std::count(outcome.begin(), outcome.end(), 2) == kWriters - 1);
    CHECK(store.load(base.assessment_id).assessment.revision == current.revision + 1);
  }
}

TEST_CASE("corruption is detected") {
  TempDir dir;
  FileStore store(dir.path());
  const Assessment a = rich_assessment();
  Assessment first = a;
  first.revision = 1;
  store.save(first, 0);
  const fs::path path = dir.path() / "acme" / (a.assessment_id + ".json");
  const std::string good = slurp(path);

  SUBCASE("every single-bit flip") {
    std::size_t undetected = 0;
    for (std::size_t i = 0; i < good.size(); ++i) {
      std::string bad = good;
      bad[i] = static_cast<char>(bad[i] ^ 0x01);
      try {
        decode_document(bad);
        ++undetected;
        MESSAGE("undetected flip at " << i << ": '" << good[i] << "'");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CorruptDocument);
      }
    }
    CHECK(undetected == 0);
  }
  SUBCASE("edited score with stale checksum") {
    std::string bad = good;
    const auto pos = bad.find("\"score\": 3");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 10, "\"score\": 4");
    spit(path, bad);
    CHECK(error_of([&] { store.load(a.assessment_id); }) == ErrorCode::CorruptDocument);
  }
  SUBCASE("truncated file") {
    spit(path, good.substr(0, good.size() / 2));
    CHECK(error_of([&] { store.load(a.assessment_id); }) == ErrorCode::CorruptDocument);
  }
  SUBCASE("corrupt file blocks further saves") {
    spit(path, good.substr(1));
    Assessment next = first;
    next.revision = 2;
    CHECK(error_of([&] { store.save(next, 1); }) == ErrorCode::CorruptDocument);
  }
}
