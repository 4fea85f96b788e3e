#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuzzynet/model.hpp"
#include "fuzzynet/similarity.hpp"

namespace fuzzynet {

inline constexpr int kLevelCount = 4;

/// One similarity level. Bands are half-open [lo, hi) except the top band,
/// which is closed at 1, so the four bands tile [0, 1] without overlap.
struct SimilarityBand {
  int level = 1;
  double lo = 0.0;
  double hi = 0.0;
  bool hi_inclusive = false;

  bool contains(double score) const;
  double midpoint() const { return (lo + hi) / 2.0; }
  /// 0 inside the band, otherwise the gap to the nearest edge.
  double distance(double score) const;
};

std::array<SimilarityBand, kLevelCount> standard_bands();

/// Band index (level) holding `score` under the standard bands.
int band_level(double score);

/// Synthetic prototype for one level: the union schema of a kind with every
/// degree set to the band midpoint and no necessary parts.
struct ReferenceEntity {
  int level = 1;
  Entity entity;

  friend bool operator==(const ReferenceEntity&, const ReferenceEntity&) = default;
};

struct ClassMember {
  Label name;
  double score = 0.0;

  friend bool operator==(const ClassMember&, const ClassMember&) = default;
};

struct SimilarityClass {
  int level = 1;
  ReferenceEntity reference;
  std::vector<ClassMember> members;  // score desc, then name asc

  friend bool operator==(const SimilarityClass&, const SimilarityClass&) = default;
};

struct Partition {
  EntityKind kind = EntityKind::kObjects;
  UnmatchedPolicy policy = UnmatchedPolicy::kZero;
  std::string kb_fingerprint;
  std::optional<Label> pivot;  // set for pivot partitions
  std::array<SimilarityClass, kLevelCount> classes;
  std::map<Label, int> assignment;

  const SimilarityClass& at_level(int level) const { return classes.at(level - 1); }
  std::size_t entity_count() const { return assignment.size(); }

  friend bool operator==(const Partition&, const Partition&) = default;
};

ReferenceEntity build_reference_entity(const KnowledgeBase& kb, EntityKind kind,
                                       const SimilarityBand& band);

struct ClassAssignment {
  int level = 1;
  std::array<double, kLevelCount> scores{};  // score against each reference
};

/// Picks the level whose band holds the entity's score against that level's
/// reference. Several qualifying bands: largest score wins. None: the band
/// nearest its own score wins. Ties go to the higher level in both cases.
ClassAssignment assign_class(EntityRef entity, const std::array<ReferenceEntity, kLevelCount>& references,
                             const std::array<SimilarityBand, kLevelCount>& bands,
                             UnmatchedPolicy policy);

/// Same resolution rule as assign_class, applied to precomputed scores.
int resolve_level(const std::array<double, kLevelCount>& scores,
                  const std::array<SimilarityBand, kLevelCount>& bands);

Partition partition_kb(const KnowledgeBase& kb, EntityKind kind, UnmatchedPolicy policy);

/// Bins every entity by sim(pivot, entity). Throws kUnknownPivot.
Partition partition_by_pivot(const KnowledgeBase& kb, EntityKind kind, const Label& pivot,
                             const std::array<SimilarityBand, kLevelCount>& bands,
                             UnmatchedPolicy policy);

/// Levels ordered by distance between band midpoints, nearest first; ties go
/// to the higher level.
std::array<int, kLevelCount> class_visit_order(int start);

}  // namespace fuzzynet
