#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fuzzynet {

// Closed set of machine-readable failure codes. The kebab-case spelling
// returned by to_string() is what the CLI and HTTP layers emit.
enum class ErrorCode {
  kEmptyLabel,
  kDegreeOutOfRange,
  kBothEmpty,
  kNoPairedValues,
  kKindMismatch,
  kNoPairedAttributes,
  kNoPairedFacets,
  kEmptyKind,
  kUnknownPivot,
  kUnknownEntity,
  kFingerprintMismatch,
  kEmptyPartition,
  kNoPartition,
  kQueryKindMismatch,
  kInvalidQuery,
  kSessionNotActive,
  kNoCurrentCandidate,
  kUnknownSession,
  kSessionGone,
  kSessionBusy,
  kParseError,
  kValidationError,
  kMalformedBody,
  kIoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fuzzynet
