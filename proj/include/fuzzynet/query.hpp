#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzynet/model.hpp"
#include "fuzzynet/partition.hpp"
#include "fuzzynet/similarity.hpp"

namespace fuzzynet {

/// A partial user description of the unknown entity. Possible degrees only.
struct Query {
  std::string label;
  Entity description;

  EntityKind kind() const { return kind_of(description); }
};

/// Throws kInvalidQuery when the description is empty, carries necessary
/// parts, or (for goals) is not of user origin.
void validate_query(const Query& query);

struct Candidate {
  Label name;
  double score = 0.0;
  int level = 0;  // 0 when no partition is involved

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct ExhaustiveResult {
  std::vector<Candidate> candidates;  // score desc, name asc
  std::vector<Label> skipped;         // not comparable with the query
  long evaluations = 0;
};

/// Scores every entity of the query's kind. Throws kEmptyKind.
ExhaustiveResult exhaustive_resolve(const KnowledgeBase& kb, const Query& query,
                                    UnmatchedPolicy policy);

enum class SessionMode { kRouted, kExhaustive };
enum class SessionState { kActive, kAccepted, kExhausted };

std::string_view to_string(SessionMode mode);
std::optional<SessionMode> parse_session_mode(std::string_view text);
std::string_view to_string(SessionState state);

struct ResolutionRecord {
  std::string query_label;
  Label entity;
  double score = 0.0;
  int level = 0;
  int rejections = 0;
  long evaluations = 0;
  std::vector<Label> skipped;  // entities not comparable with the query
};

enum class SessionEventType { kStarted, kPresented, kRejected, kAccepted, kExhausted };

std::string_view to_string(SessionEventType type);

struct SessionEvent {
  SessionEventType type;
  std::string session_id;
  std::optional<Candidate> candidate;
  long evaluations = 0;
};

using SessionObserver = std::function<void(const SessionEvent&)>;

/// 128-bit random token, hex encoded.
std::string new_session_id();

/// One identification dialogue. Candidates are presented one at a time; a
/// reject moves to the next member of the current class, then to the next
/// class on the route. Classes are scored lazily on first visit.
///
/// Not thread-safe: callers serialize operations on a given session.
class Session {
 public:
  /// Throws kFingerprintMismatch, kQueryKindMismatch, kEmptyPartition,
  /// kInvalidQuery.
  static Session start(std::shared_ptr<const KnowledgeBase> kb,
                       std::shared_ptr<const Partition> partition, Query query, SessionMode mode,
                       SessionObserver observer = {});

  /// Next candidate, or nullopt once the pool is exhausted.
  /// Throws kSessionNotActive.
  std::optional<Candidate> reject();
  /// Throws kSessionNotActive, kNoCurrentCandidate.
  ResolutionRecord accept();

  const std::string& id() const { return id_; }
  const Query& query() const { return query_; }
  SessionMode mode() const { return mode_; }
  SessionState state() const { return state_; }
  const std::vector<int>& route() const { return route_; }
  const std::vector<Candidate>& presented() const { return presented_; }
  const std::optional<Candidate>& current() const { return current_; }
  const std::optional<Candidate>& accepted() const { return accepted_; }
  const std::vector<Label>& skipped() const { return skipped_; }
  /// Query-vs-reference scores per level (routed mode), absent on error.
  const std::array<std::optional<double>, kLevelCount>& reference_scores() const {
    return reference_scores_;
  }
  long evaluations() const { return evaluations_; }
  int rejections() const { return rejections_; }

 private:
  Session() = default;

  std::optional<Candidate> advance();
  void load_class(int level);
  void emit(SessionEventType type);

  std::shared_ptr<const KnowledgeBase> kb_;
  std::shared_ptr<const Partition> partition_;
  std::string id_;
  Query query_;
  SessionMode mode_ = SessionMode::kRouted;
  SessionState state_ = SessionState::kActive;
  std::vector<int> route_;
  std::array<std::optional<double>, kLevelCount> reference_scores_{};
  std::vector<Candidate> presented_;
  std::optional<Candidate> current_;
  std::optional<Candidate> accepted_;
  std::vector<Label> skipped_;
  long evaluations_ = 0;
  int rejections_ = 0;

  // Pending candidates of the class (or global ranking) being walked.
  std::vector<Candidate> queue_;
  std::size_t queue_pos_ = 0;
  std::size_t route_pos_ = 0;
  bool global_loaded_ = false;

  SessionObserver observer_;
};

}  // namespace fuzzynet
