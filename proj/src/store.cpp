#include "maturity/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "maturity/codec.hpp"
#include "maturity/error.hpp"

namespace fs = std::filesystem;

namespace maturity {

using codec::json;

namespace {

json history_json(const std::vector<HistoryEntry>& history) {
  json out = json::array();
  for (const auto& h : history) {
    out.push_back({{"revision", h.revision}, {"checksum", h.checksum}, {"updated_at", format_timestamp(h.updated_at)}});
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::StorageError, "SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string checksum_of_body(const json& assessment, const json& history) {
  json body = {{"assessment", assessment}, {"history", history}};
  return "sha256:" + sha256_hex(codec::canonical(body));
}

[[noreturn]] void corrupt(const std::string& message) { throw Error(ErrorCode::CorruptDocument, message); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageError, fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::StorageError, fmt::format("write to {} failed: {}", path.string(), std::strerror(errno)));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

class FileLock {
 public:
  explicit FileLock(const fs::path& path) : fd_(::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644)) {
    if (fd_ < 0) {
      throw Error(ErrorCode::StorageError, fmt::format("cannot open lock {}: {}", path.string(), std::strerror(errno)));
    }
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        throw Error(ErrorCode::StorageError, fmt::format("flock {} failed", path.string()));
      }
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

void atomic_replace(const fs::path& target, std::string_view bytes) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  const fs::path tmp = target.parent_path() / fmt::format(".{}.{:016x}.tmp", target.filename().string(), rng());
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::StorageError, fmt::format("cannot create {}", tmp.string()));
  try {
    write_all(fd, bytes, tmp);
    if (::fsync(fd) != 0) throw Error(ErrorCode::StorageError, fmt::format("fsync {} failed", tmp.string()));
  } catch (...) {
    ::close(fd);
    fs::remove(tmp);
    throw;
  }
  ::close(fd);
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::StorageError, fmt::format("rename to {} failed: {}", target.string(), ec.message()));
  }
}

void append_line(const fs::path& path, std::string_view line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::StorageError, fmt::format("cannot open {}", path.string()));
  try {
    write_all(fd, line, path);
    ::fsync(fd);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

AssessmentDocument decode_json_document(const json& root) {
  if (!root.is_object()) corrupt("document root must be an object");
  for (const char* key : {"format_version", "checksum", "assessment", "history"}) {
    if (!root.contains(key)) corrupt(fmt::format("document lacks '{}'", key));
  }
  AssessmentDocument doc;
  if (!root["format_version"].is_number_integer() || root["format_version"].get<int>() != AssessmentDocument::kFormatVersion) {
    corrupt("unsupported document format_version");
  }
  if (!root["checksum"].is_string()) corrupt("checksum must be a string");
  doc.checksum = root["checksum"].get<std::string>();
  if (checksum_of_body(root["assessment"], root["history"]) != doc.checksum) {
    corrupt("checksum mismatch");
  }
  try {
    doc.assessment = codec::assessment_from_json(root["assessment"]);
    if (!root["history"].is_array()) corrupt("history must be an array");
    for (const auto& h : root["history"]) {
      HistoryEntry e;
      e.revision = h.at("revision").get<std::int64_t>();
      e.checksum = h.at("checksum").get<std::string>();
      auto t = parse_timestamp(h.at("updated_at").get<std::string>());
      if (!t) corrupt("history entry has a bad timestamp");
      e.updated_at = *t;
      doc.history.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    corrupt(fmt::format("malformed document: {}", e.what()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptDocument) throw;
    corrupt(fmt::format("malformed document: {}", e.what()));
  }
  std::int64_t last = 0;
  for (const auto& h : doc.history) {
    if (h.revision <= last) corrupt("history revisions must strictly increase");
    last = h.revision;
  }
  if (doc.assessment.revision <= last) corrupt("document revision must exceed its history");
  return doc;
}

}  // namespace

bool is_safe_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
           c == '-';
  });
}

std::string compute_checksum(const Assessment& a, const std::vector<HistoryEntry>& history) {
  return checksum_of_body(codec::to_json(a), history_json(history));
}

AssessmentDocument make_document(Assessment a, std::vector<HistoryEntry> history) {
  AssessmentDocument doc;
  doc.checksum = compute_checksum(a, history);
  doc.assessment = std::move(a);
  doc.history = std::move(history);
  return doc;
}

namespace {

json document_json(const AssessmentDocument& doc) {
  return {{"format_version", doc.format_version},
          {"checksum", doc.checksum},
          {"assessment", codec::to_json(doc.assessment)},
          {"history", history_json(doc.history)}};
}

}  // namespace

std::string encode_document(const AssessmentDocument& doc) {
  return document_json(doc).dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

AssessmentDocument decode_document(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    corrupt(fmt::format("document is not valid JSON: {}", e.what()));
  }
  return decode_json_document(root);
}

FileStore::FileStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::StorageError, fmt::format("cannot create store {}: {}", root_.string(), ec.message()));
}

std::optional<fs::path> FileStore::find_document(std::string_view assessment_id) const {
  if (!is_safe_id(assessment_id)) return std::nullopt;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root_, ec)) {
    if (!entry.is_directory()) continue;
    fs::path candidate = entry.path() / (std::string(assessment_id) + ".json");
    if (fs::exists(candidate)) return candidate;
  }
  return std::nullopt;
}

bool FileStore::exists(std::string_view assessment_id) const { return find_document(assessment_id).has_value(); }

std::int64_t FileStore::save(const Assessment& a, std::int64_t expected_revision) {
  if (!is_safe_id(a.assessment_id) || !is_safe_id(a.organization.id)) {
    throw Error(ErrorCode::ValidationError, "assessment and organization ids may only use [A-Za-z0-9._-]",
                {a.assessment_id, a.organization.id});
  }
  const fs::path dir = root_ / a.organization.id;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::StorageError, fmt::format("cannot create {}: {}", dir.string(), ec.message()));

  const fs::path doc_path = dir / (a.assessment_id + ".json");
  const fs::path log_path = dir / (a.assessment_id + ".log.jsonl");
  FileLock lock(dir / (a.assessment_id + ".lock"));

  std::int64_t stored_revision = 0;
  std::vector<HistoryEntry> history;
  if (fs::exists(doc_path)) {
    AssessmentDocument current = decode_document(read_file(doc_path));
    stored_revision = current.assessment.revision;
    history = std::move(current.history);
    history.push_back({current.assessment.revision, current.checksum, current.assessment.updated_at});
  } else if (auto elsewhere = find_document(a.assessment_id)) {
    throw Error(ErrorCode::RevisionConflict,
                fmt::format("assessment '{}' already exists under another organization", a.assessment_id),
                {a.assessment_id});
  }

  if (stored_revision != expected_revision) {
    throw Error(ErrorCode::RevisionConflict,
                fmt::format("expected revision {} but the stored revision is {}", expected_revision, stored_revision),
                {a.assessment_id});
  }
  if (a.revision <= stored_revision) {
    throw Error(ErrorCode::ValidationError,
                fmt::format("new revision {} must exceed stored revision {}", a.revision, stored_revision),
                {a.assessment_id});
  }

  AssessmentDocument doc = make_document(a, std::move(history));
  atomic_replace(doc_path, encode_document(doc));
  append_line(log_path, document_json(doc).dump(-1, ' ', false, json::error_handler_t::strict) + "\n");
  return a.revision;
}

AssessmentDocument FileStore::load(std::string_view assessment_id, std::optional<std::int64_t> revision) const {
  auto path = find_document(assessment_id);
  if (!path) {
    throw Error(ErrorCode::NotFound, fmt::format("assessment '{}' not found", assessment_id),
                {std::string(assessment_id)});
  }
  AssessmentDocument doc = decode_document(read_file(*path));
  if (!revision || *revision == doc.assessment.revision) return doc;

  fs::path log_path = *path;
  log_path.replace_extension(".log.jsonl");
  if (fs::exists(log_path)) {
    std::ifstream in(log_path, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      AssessmentDocument past = decode_document(line);
      if (past.assessment.revision == *revision) return past;
    }
  }
  throw Error(ErrorCode::NotFound, fmt::format("assessment '{}' has no revision {}", assessment_id, *revision),
              {std::string(assessment_id)});
}

std::vector<AssessmentSummary> FileStore::list(std::optional<std::string_view> organization_id) const {
  std::vector<AssessmentSummary> out;
  std::error_code ec;
  for (const auto& org_dir : fs::directory_iterator(root_, ec)) {
    if (!org_dir.is_directory()) continue;
    if (organization_id && org_dir.path().filename().string() != *organization_id) continue;
    for (const auto& entry : fs::directory_iterator(org_dir.path(), ec)) {
      const auto name = entry.path().filename().string();
      if (!entry.is_regular_file() || name.front() == '.' || entry.path().extension() != ".json") continue;
      const Assessment a = decode_document(read_file(entry.path())).assessment;
      out.push_back({a.assessment_id, a.organization, a.revision, a.scope, a.granularity, a.responses.size(),
                     a.created_at, a.updated_at, a.as_of});
    }
  }
  std::sort(out.begin(), out.end(), [](const AssessmentSummary& x, const AssessmentSummary& y) {
    return std::tie(x.organization.id, x.assessment_id) < std::tie(y.organization.id, y.assessment_id);
  });
  return out;
}

std::vector<Assessment> FileStore::load_organization(std::string_view organization_id) const {
  std::vector<Assessment> out;
  for (const auto& summary : list(organization_id)) out.push_back(load(summary.assessment_id).assessment);
  return out;
}

}  // namespace maturity
