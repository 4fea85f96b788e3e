#include "fuzzynet/query.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include <openssl/rand.h>

namespace fuzzynet {

namespace {

void sort_candidates(std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  });
}

bool has_necessary(const FuzzyValue& v) { return v.necessary.has_value(); }

bool attributes_ok(const AttributeMap& attributes, std::string& why) {
  bool any_possible = false;
  for (const auto& [name, a] : attributes) {
    if (a.kind == AttributeKind::kSimple) {
      if (has_necessary(a.value)) why = "attribute '" + name.text() + "' carries necessary degrees";
      any_possible = any_possible || !a.value.possible.empty();
    } else {
      for (const auto& [sub, v] : a.values) {
        if (has_necessary(v)) why = "attribute '" + name.text() + "' carries necessary degrees";
        any_possible = any_possible || !v.possible.empty();
      }
    }
  }
  if (why.empty() && !any_possible) why = "description has no possible degrees";
  return why.empty();
}

}  // namespace

void validate_query(const Query& query) {
  std::string why;
  if (const auto* g = std::get_if<Goal>(&query.description)) {
    bool any_possible = false;
    for (const auto& [facet, v] : g->facets) {
      if (has_necessary(v)) why = "facet '" + facet.text() + "' carries necessary degrees";
      any_possible = any_possible || !v.possible.empty();
    }
    if (why.empty() && g->origin != GoalOrigin::kUser) why = "query goals must have user origin";
    if (why.empty() && !any_possible) why = "description has no possible degrees";
  } else if (const auto* o = std::get_if<FuzzyObject>(&query.description)) {
    attributes_ok(o->attributes, why);
  } else {
    attributes_ok(std::get<FuzzyInstance>(query.description).attributes, why);
  }
  if (!why.empty()) throw Error(ErrorCode::kInvalidQuery, why);
}

ExhaustiveResult exhaustive_resolve(const KnowledgeBase& kb, const Query& query,
                                    UnmatchedPolicy policy) {
  validate_query(query);
  const auto entities = kb.entities(query.kind());
  if (entities.empty()) {
    throw Error(ErrorCode::kEmptyKind,
                "knowledge base has no " + std::string(to_string(query.kind())));
  }
  ExhaustiveResult out;
  const EntityRef q = entity_ref(query.description);
  for (EntityRef e : entities) {
    ++out.evaluations;
    try {
      out.candidates.push_back({name_of(e), sim_entities(q, e, policy).value, 0});
    } catch (const Error&) {
      out.skipped.push_back(name_of(e));
    }
  }
  sort_candidates(out.candidates);
  return out;
}

std::string_view to_string(SessionMode mode) {
  return mode == SessionMode::kRouted ? "routed" : "exhaustive";
}

std::optional<SessionMode> parse_session_mode(std::string_view text) {
  if (text == "routed") return SessionMode::kRouted;
  if (text == "exhaustive") return SessionMode::kExhaustive;
  return std::nullopt;
}

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::kActive: return "active";
    case SessionState::kAccepted: return "accepted";
    case SessionState::kExhausted: return "exhausted";
  }
  return "active";
}

std::string_view to_string(SessionEventType type) {
  switch (type) {
    case SessionEventType::kStarted: return "started";
    case SessionEventType::kPresented: return "presented";
    case SessionEventType::kRejected: return "rejected";
    case SessionEventType::kAccepted: return "accepted";
    case SessionEventType::kExhausted: return "exhausted";
  }
  return "started";
}

std::string new_session_id() {
  unsigned char bytes[16];
  if (RAND_bytes(bytes, sizeof bytes) != 1) {
    throw Error(ErrorCode::kIoError, "random source unavailable");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  id.reserve(32);
  for (unsigned char b : bytes) {
    id.push_back(kHex[b >> 4]);
    id.push_back(kHex[b & 0xf]);
  }
  return id;
}

Session Session::start(std::shared_ptr<const KnowledgeBase> kb,
                       std::shared_ptr<const Partition> partition, Query query, SessionMode mode,
                       SessionObserver observer) {
  validate_query(query);
  if (partition->kb_fingerprint != kb->fingerprint) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "partition was built for a different knowledge base");
  }
  if (partition->kind != query.kind()) {
    throw Error(ErrorCode::kQueryKindMismatch,
                "query is about " + std::string(to_string(query.kind())) + " but the partition holds " +
                    std::string(to_string(partition->kind)));
  }
  if (partition->entity_count() == 0) {
    throw Error(ErrorCode::kEmptyPartition, "partition has no members");
  }

  Session s;
  s.kb_ = std::move(kb);
  s.partition_ = std::move(partition);
  s.id_ = new_session_id();
  s.query_ = std::move(query);
  s.mode_ = mode;
  s.observer_ = std::move(observer);
  s.emit(SessionEventType::kStarted);

  if (mode == SessionMode::kRouted) {
    const EntityRef q = entity_ref(s.query_.description);
    std::array<double, kLevelCount> order_key{};
    for (int i = 0; i < kLevelCount; ++i) {
      ++s.evaluations_;
      try {
        const double v =
            sim_entities(q, entity_ref(s.partition_->classes[i].reference.entity), UnmatchedPolicy::kIgnore)
                .value;
        s.reference_scores_[i] = v;
        order_key[i] = v;
      } catch (const Error&) {
        order_key[i] = -std::numeric_limits<double>::infinity();
      }
    }
    s.route_ = {1, 2, 3, 4};
    std::sort(s.route_.begin(), s.route_.end(), [&](int a, int b) {
      if (order_key[a - 1] != order_key[b - 1]) return order_key[a - 1] > order_key[b - 1];
      return a > b;
    });
  }
  s.advance();
  return s;
}

void Session::emit(SessionEventType type) {
  if (!observer_) return;
  SessionEvent event{type, id_, std::nullopt, evaluations_};
  if (type == SessionEventType::kPresented || type == SessionEventType::kRejected ||
      type == SessionEventType::kAccepted) {
    event.candidate = current_;
  }
  observer_(event);
}

void Session::load_class(int level) {
  queue_.clear();
  queue_pos_ = 0;
  const EntityRef q = entity_ref(query_.description);
  for (const ClassMember& member : partition_->at_level(level).members) {
    const auto entity = kb_->find(query_.kind(), member.name);
    if (!entity) continue;
    ++evaluations_;
    try {
      queue_.push_back(
          {member.name, sim_entities(q, *entity, UnmatchedPolicy::kIgnore).value, level});
    } catch (const Error&) {
      skipped_.push_back(member.name);
    }
  }
  sort_candidates(queue_);
}

std::optional<Candidate> Session::advance() {
  for (;;) {
    if (queue_pos_ < queue_.size()) {
      current_ = queue_[queue_pos_++];
      presented_.push_back(*current_);
      emit(SessionEventType::kPresented);
      return current_;
    }
    if (mode_ == SessionMode::kExhaustive && !global_loaded_) {
      global_loaded_ = true;
      const ExhaustiveResult all = exhaustive_resolve(*kb_, query_, UnmatchedPolicy::kIgnore);
      evaluations_ += all.evaluations;
      skipped_ = all.skipped;
      queue_ = all.candidates;
      queue_pos_ = 0;
      for (Candidate& c : queue_) {
        auto it = partition_->assignment.find(c.name);
        c.level = it == partition_->assignment.end() ? 0 : it->second;
      }
      continue;
    }
    if (mode_ == SessionMode::kRouted && route_pos_ < route_.size()) {
      load_class(route_[route_pos_++]);
      continue;
    }
    break;
  }
  current_.reset();
  state_ = SessionState::kExhausted;
  emit(SessionEventType::kExhausted);
  return std::nullopt;
}

std::optional<Candidate> Session::reject() {
  if (state_ != SessionState::kActive) {
    throw Error(ErrorCode::kSessionNotActive,
                "session is " + std::string(to_string(state_)));
  }
  ++rejections_;
  emit(SessionEventType::kRejected);
  return advance();
}

ResolutionRecord Session::accept() {
  if (state_ != SessionState::kActive) {
    throw Error(ErrorCode::kSessionNotActive,
                "session is " + std::string(to_string(state_)));
  }
  if (!current_) throw Error(ErrorCode::kNoCurrentCandidate, "no candidate to accept");
  state_ = SessionState::kAccepted;
  accepted_ = current_;
  emit(SessionEventType::kAccepted);
  return {query_.label, current_->name, current_->score, current_->level, rejections_,
          evaluations_, skipped_};
}

}  // namespace fuzzynet
