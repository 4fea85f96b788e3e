#include "fuzzynet/label.hpp"

#include <cctype>

#include "fuzzynet/error.hpp"

namespace fuzzynet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyLabel: return "empty-label";
    case ErrorCode::kDegreeOutOfRange: return "degree-out-of-range";
    case ErrorCode::kBothEmpty: return "both-empty";
    case ErrorCode::kNoPairedValues: return "no-paired-values";
    case ErrorCode::kKindMismatch: return "kind-mismatch";
    case ErrorCode::kNoPairedAttributes: return "no-paired-attributes";
    case ErrorCode::kNoPairedFacets: return "no-paired-facets";
    case ErrorCode::kEmptyKind: return "empty-kind";
    case ErrorCode::kUnknownPivot: return "unknown-pivot";
    case ErrorCode::kUnknownEntity: return "unknown-entity";
    case ErrorCode::kFingerprintMismatch: return "fingerprint-mismatch";
    case ErrorCode::kEmptyPartition: return "empty-partition";
    case ErrorCode::kNoPartition: return "no-partition";
    case ErrorCode::kQueryKindMismatch: return "query-kind-mismatch";
    case ErrorCode::kInvalidQuery: return "invalid-query";
    case ErrorCode::kSessionNotActive: return "session-not-active";
    case ErrorCode::kNoCurrentCandidate: return "no-current-candidate";
    case ErrorCode::kUnknownSession: return "unknown-session";
    case ErrorCode::kSessionGone: return "session-gone";
    case ErrorCode::kSessionBusy: return "session-busy";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kValidationError: return "validation-error";
    case ErrorCode::kMalformedBody: return "malformed-body";
    case ErrorCode::kIoError: return "io-error";
  }
  return "unknown";
}

std::string normalize_label_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyLabel, "label is empty after trimming");
  }
  return out;
}

}  // namespace fuzzynet
