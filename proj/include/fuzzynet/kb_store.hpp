#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fuzzynet/error.hpp"
#include "fuzzynet/model.hpp"
#include "fuzzynet/partition.hpp"
#include "fuzzynet/query.hpp"

namespace fuzzynet {

struct ValidationIssue {
  std::string path;  // JSON-pointer-like location, e.g. /objects/0/attributes/1
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
  bool has_error(std::string_view code) const;
  bool has_warning(std::string_view code) const;
};

/// Carries the full report of a KB that failed validation.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Checks a parsed KB document of any shape. Never throws; reports every
/// problem it finds.
ValidationReport validate_kb(const nlohmann::json& document);

/// Parses, validates and builds a KB. Degrees are quantized to 9 decimals.
/// Throws Error(kParseError) or ValidationError.
KnowledgeBase load_kb(std::string_view source);
KnowledgeBase load_kb_file(const std::string& path);

/// Canonical bytes: sorted keys, attributes ordered by name, degrees with at
/// most 9 fractional digits. Excludes the fingerprint itself.
std::string save_kb(const KnowledgeBase& kb);
nlohmann::json kb_to_json(const KnowledgeBase& kb);
/// sha-256 hex of save_kb(kb).
std::string compute_fingerprint(const KnowledgeBase& kb);

nlohmann::json entity_to_json(const Entity& entity);
nlohmann::json entity_to_json(EntityRef entity);
/// Builds a standalone entity (query description, reference prototype).
/// Throws Error(kInvalidQuery) describing the first problem.
Entity entity_from_json(EntityKind kind, const nlohmann::json& document);

std::string save_partition(const Partition& partition);
nlohmann::json partition_to_json(const Partition& partition);
/// Throws Error(kParseError) on malformed input.
Partition load_partition(std::string_view source);
Partition load_partition_file(const std::string& path);

/// Query file: {"kind": ..., "label": ..., "description": {...entity...}}.
Query query_from_json(const nlohmann::json& document);
Query load_query_file(const std::string& path);

/// Rounds to 9 decimals (half-even on exact ties) and prints without
/// trailing zeros, e.g. 0.7 -> "0.7", 1 -> "1".
std::string format_decimal(double value);
/// JSON number for a degree or score: quantized, and integral values
/// written as integers ("1", not "1.0").
nlohmann::json json_number(double value);

nlohmann::json candidate_to_json(const Candidate& candidate);
nlohmann::json record_to_json(const ResolutionRecord& record);
nlohmann::json session_to_json(const Session& session);
/// One line of the session log (no trailing newline).
std::string session_event_to_line(const SessionEvent& event);

/// Appends session events as line-delimited JSON to a stream.
class SessionLogWriter {
 public:
  explicit SessionLogWriter(std::ostream& out) : out_(&out) {}
  void operator()(const SessionEvent& event) const;

 private:
  std::ostream* out_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace fuzzynet
