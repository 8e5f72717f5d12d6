#include "maturity/error.hpp"

namespace maturity {

std::string_view to_machine_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::IntegrityError: return "INTEGRITY_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::DomainError: return "DOMAIN_ERROR";
    case ErrorCode::InapplicableTarget: return "INAPPLICABLE_TARGET";
    case ErrorCode::UnknownTarget: return "UNKNOWN_TARGET";
    case ErrorCode::GranularityMismatch: return "GRANULARITY_MISMATCH";
    case ErrorCode::GranularityUnsupported: return "GRANULARITY_UNSUPPORTED";
    case ErrorCode::ScopeUnsupported: return "SCOPE_UNSUPPORTED";
    case ErrorCode::UnknownSystem: return "UNKNOWN_SYSTEM";
    case ErrorCode::NoData: return "NO_DATA";
    case ErrorCode::MixedOrganizations: return "MIXED_ORGANIZATIONS";
    case ErrorCode::RevisionConflict: return "REVISION_CONFLICT";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::CorruptDocument: return "CORRUPT_DOCUMENT";
    case ErrorCode::StorageError: return "STORAGE_ERROR";
    case ErrorCode::Unauthorized: return "UNAUTHORIZED";
  }
  return "UNKNOWN";
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::UnknownSystem:
    case ErrorCode::UnknownTarget:
      return 404;
    case ErrorCode::RevisionConflict:
      return 409;
    case ErrorCode::Unauthorized:
      return 401;
    case ErrorCode::CorruptDocument:
    case ErrorCode::StorageError:
    case ErrorCode::IntegrityError:
      return 500;
    case ErrorCode::InapplicableTarget:
    case ErrorCode::GranularityMismatch:
    case ErrorCode::GranularityUnsupported:
    case ErrorCode::ScopeUnsupported:
    case ErrorCode::NoData:
    case ErrorCode::MixedOrganizations:
    case ErrorCode::ValidationError:
    case ErrorCode::DomainError:
      return 422;
    case ErrorCode::ParseError:
      return 400;
  }
  return 500;
}

}  // namespace maturity
