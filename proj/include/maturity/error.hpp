#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maturity {

// One machine code per failure class. The HTTP API and the CLI report these
// verbatim, so renaming one is a wire-format change.
enum class ErrorCode {
  ParseError,
  IntegrityError,
  ValidationError,
  DomainError,
  InapplicableTarget,
  UnknownTarget,
  GranularityMismatch,
  GranularityUnsupported,
  ScopeUnsupported,
  UnknownSystem,
  NoData,
  MixedOrganizations,
  RevisionConflict,
  NotFound,
  CorruptDocument,
  StorageError,
  Unauthorized,
};

std::string_view to_machine_code(ErrorCode code) noexcept;

// Client errors are 4xx; storage faults are 5xx.
int http_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<std::string> ids = {})
      : std::runtime_error(std::move(message)), code_(code), ids_(std::move(ids)) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view machine_code() const noexcept { return to_machine_code(code_); }
  const std::vector<std::string>& offending_ids() const noexcept { return ids_; }

 private:
  ErrorCode code_;
  std::vector<std::string> ids_;
};

}  // namespace maturity
