#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fuzzynet/error.hpp"
#include "fuzzynet/model.hpp"

namespace fuzzynet {

/// How a label present on only one side of a comparison is treated.
/// kIgnore skips it (partial descriptions); kZero scores it 0.
enum class UnmatchedPolicy { kIgnore, kZero };

std::string_view to_string(UnmatchedPolicy policy);
std::optional<UnmatchedPolicy> parse_policy(std::string_view text);

/// Similarity in [0, 1]. `mixed_necessity` is raised when some compared pair
/// had a necessary part on exactly one side and fell back to possible-only.
struct SimilarityScore {
  double value = 0.0;
  bool mixed_necessity = false;
};

/// height(a ∩ b) / height(a ∪ b). Zero iff the supports are disjoint.
/// Throws kBothEmpty when both sets are empty.
SimilarityScore sim_sets(const FuzzySet& a, const FuzzySet& b);

/// Mean of the necessary and possible similarities when both sides carry a
/// non-empty necessary part, otherwise the possible similarity alone.
/// `possible_only` forces the latter (user goals, reference prototypes).
SimilarityScore sim_value(const FuzzyValue& a, const FuzzyValue& b, bool possible_only = false);

SimilarityScore sim_composite_attribute(const Attribute& a, const Attribute& b,
                                        UnmatchedPolicy policy);
SimilarityScore sim_attribute(const Attribute& a, const Attribute& b, UnmatchedPolicy policy);

SimilarityScore sim_object(const FuzzyObject& a, const FuzzyObject& b, UnmatchedPolicy policy);
SimilarityScore sim_instance(const FuzzyInstance& a, const FuzzyInstance& b,
                             UnmatchedPolicy policy);

/// Facets are paired by label and one-sided facets are always skipped.
/// Any pair involving a user goal compares possible parts only.
SimilarityScore sim_goal(const Goal& a, const Goal& b);

/// Dispatches on the entity alternative. Throws kKindMismatch when the two
/// refs hold different kinds. `policy` is not consulted for goals.
SimilarityScore sim_entities(EntityRef a, EntityRef b, UnmatchedPolicy policy);

struct MatrixCell {
  double score = 0.0;
  bool warning = false;               // pair error or mixed necessity
  std::optional<ErrorCode> error;     // set when the pair could not be compared
};

struct SimilarityMatrix {
  EntityKind kind = EntityKind::kObjects;
  std::vector<Label> names;                 // KB declaration order
  std::vector<std::vector<MatrixCell>> cells;
};

/// Full pairwise matrix for one kind. Diagonal is 1; failed pairs surface as
/// score 0 with the cell's error set. Throws kEmptyKind.
SimilarityMatrix similarity_matrix(const KnowledgeBase& kb, EntityKind kind,
                                   UnmatchedPolicy policy);

}  // namespace fuzzynet
