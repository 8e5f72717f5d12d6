#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maturity/assessment.hpp"

namespace maturity {

struct HistoryEntry {
  std::int64_t revision = 0;
  std::string checksum;
  Timestamp updated_at{};

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

// On-disk envelope. The checksum covers the assessment and the history, i.e.
// everything except format_version and the checksum itself.
struct AssessmentDocument {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  std::string checksum;  // "sha256:<hex>"
  Assessment assessment;
  std::vector<HistoryEntry> history;  // prior revisions, oldest first

  friend bool operator==(const AssessmentDocument&, const AssessmentDocument&) = default;
};

// Builds an envelope with a fresh checksum.
AssessmentDocument make_document(Assessment a, std::vector<HistoryEntry> history = {});

// Canonical file bytes: sorted keys, two-space indent, trailing newline.
std::string encode_document(const AssessmentDocument& doc);

// Throws Error{CorruptDocument} on malformed bytes or checksum mismatch.
AssessmentDocument decode_document(std::string_view bytes);

struct AssessmentSummary {
  std::string assessment_id;
  Organization organization;
  std::int64_t revision = 0;
  ScopeMode scope = ScopeMode::Holistic;
  GranularityMode granularity = GranularityMode::TopicLevel;
  std::size_t response_count = 0;
  Timestamp created_at{};
  Timestamp updated_at{};
  std::optional<Timestamp> as_of;
};

// Directory-per-organization store:
//
//   <root>/<org id>/<assessment id>.json        current envelope
//   <root>/<org id>/<assessment id>.log.jsonl   every saved envelope, one per line
//   <root>/<org id>/<assessment id>.lock        flock() target for writers
//
// save() holds an exclusive flock on the lock file while it checks the stored
// revision and swaps the document in with write-temp-then-rename, so readers
// see the old or the new file and concurrent writers from the same revision
// resolve to one success and one RevisionConflict, across threads and
// processes.
class FileStore {
 public:
  explicit FileStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  // expected_revision is the revision the caller last read (0 for a new
  // assessment). Returns the stored revision.
  // Throws Error{RevisionConflict | ValidationError | CorruptDocument | StorageError}.
  std::int64_t save(const Assessment& a, std::int64_t expected_revision);

  // Latest revision unless one is requested. Throws Error{NotFound | CorruptDocument}.
  AssessmentDocument load(std::string_view assessment_id, std::optional<std::int64_t> revision = std::nullopt) const;

  bool exists(std::string_view assessment_id) const;

  std::vector<AssessmentSummary> list(std::optional<std::string_view> organization_id = std::nullopt) const;

  // Latest revision of every assessment of one organization.
  std::vector<Assessment> load_organization(std::string_view organization_id) const;

 private:
  std::optional<std::filesystem::path> find_document(std::string_view assessment_id) const;

  std::filesystem::path root_;
};

std::string compute_checksum(const Assessment& a, const std::vector<HistoryEntry>& history);

// Ids become path components: [A-Za-z0-9._-], not starting with '.'.
bool is_safe_id(std::string_view id) noexcept;

}  // namespace maturity
