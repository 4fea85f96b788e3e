#include "fuzzynet/similarity.hpp"

#include <algorithm>
#include <string>

namespace fuzzynet {

namespace {

// Running minimum over component scores.
class MinAccumulator {
 public:
  void add(const SimilarityScore& s) {
    value_ = std::min(value_, s.value);
    mixed_ = mixed_ || s.mixed_necessity;
    any_ = true;
  }
  bool any() const { return any_; }
  SimilarityScore result() const { return {value_, mixed_}; }

 private:
  double value_ = 1.0;
  bool mixed_ = false;
  bool any_ = false;
};

// Visits the union of keys of two sorted maps, calling `both(ka, va, vb)` for
// shared keys and `one_sided()` for the rest.
template <class Map, class Both, class OneSided>
void pair_by_label(const Map& a, const Map& b, Both both, OneSided one_sided) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      one_sided();
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      one_sided();
      ++ib;
    } else {
      both(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
}

SimilarityScore sim_attribute_maps(const AttributeMap& a, const AttributeMap& b,
                                   UnmatchedPolicy policy) {
  MinAccumulator acc;
  pair_by_label(
      a, b,
      [&](const Attribute& x, const Attribute& y) {
        try {
          acc.add(sim_attribute(x, y, policy));
        } catch (const Error& e) {
          // Under ignore, a composite attribute with no shared values is as
          // uninformative as an attribute present on one side only.
          if (e.code() != ErrorCode::kNoPairedValues) throw;
        }
      },
      [&] {
        if (policy == UnmatchedPolicy::kZero) acc.add({0.0, false});
      });
  if (!acc.any()) throw Error(ErrorCode::kNoPairedAttributes, "no attribute names in common");
  return acc.result();
}

}  // namespace

std::string_view to_string(UnmatchedPolicy policy) {
  return policy == UnmatchedPolicy::kIgnore ? "ignore" : "zero";
}

std::optional<UnmatchedPolicy> parse_policy(std::string_view text) {
  if (text == "ignore") return UnmatchedPolicy::kIgnore;
  if (text == "zero") return UnmatchedPolicy::kZero;
  return std::nullopt;
}

SimilarityScore sim_sets(const FuzzySet& a, const FuzzySet& b) {
  if (a.empty() && b.empty()) {
    throw Error(ErrorCode::kBothEmpty, "similarity of two empty sets is undefined");
  }
  return {height(intersect(a, b)).value() / height(unite(a, b)).value(), false};
}

SimilarityScore sim_value(const FuzzyValue& a, const FuzzyValue& b, bool possible_only) {
  SimilarityScore possible = sim_sets(a.possible, b.possible);
  if (possible_only) return possible;

  const bool a_nec = a.necessary && !a.necessary->empty();
  const bool b_nec = b.necessary && !b.necessary->empty();
  if (a_nec && b_nec) {
    const SimilarityScore necessary = sim_sets(*a.necessary, *b.necessary);
    return {(necessary.value + possible.value) / 2.0, false};
  }
  possible.mixed_necessity = a_nec != b_nec;
  return possible;
}

SimilarityScore sim_composite_attribute(const Attribute& a, const Attribute& b,
                                        UnmatchedPolicy policy) {
  MinAccumulator acc;
  pair_by_label(
      a.values, b.values,
      [&](const FuzzyValue& x, const FuzzyValue& y) { acc.add(sim_value(x, y)); },
      [&] {
        if (policy == UnmatchedPolicy::kZero) acc.add({0.0, false});
      });
  if (!acc.any()) {
    throw Error(ErrorCode::kNoPairedValues,
                "attribute '" + a.name.text() + "' shares no value labels");
  }
  return acc.result();
}

SimilarityScore sim_attribute(const Attribute& a, const Attribute& b, UnmatchedPolicy policy) {
  if (a.kind != b.kind) {
    throw Error(ErrorCode::kKindMismatch, "attribute '" + a.name.text() + "' is " +
                                              std::string(to_string(a.kind)) + " on one side and " +
                                              std::string(to_string(b.kind)) + " on the other");
  }
  if (a.kind == AttributeKind::kSimple) return sim_value(a.value, b.value);
  return sim_composite_attribute(a, b, policy);
}

SimilarityScore sim_object(const FuzzyObject& a, const FuzzyObject& b, UnmatchedPolicy policy) {
  return sim_attribute_maps(a.attributes, b.attributes, policy);
}

SimilarityScore sim_instance(const FuzzyInstance& a, const FuzzyInstance& b,
                             UnmatchedPolicy policy) {
  return sim_attribute_maps(a.attributes, b.attributes, policy);
}

SimilarityScore sim_goal(const Goal& a, const Goal& b) {
  const bool possible_only = a.origin == GoalOrigin::kUser || b.origin == GoalOrigin::kUser;
  MinAccumulator acc;
  pair_by_label(
      a.facets, b.facets,
      [&](const FuzzyValue& x, const FuzzyValue& y) { acc.add(sim_value(x, y, possible_only)); },
      [] {});
  if (!acc.any()) throw Error(ErrorCode::kNoPairedFacets, "goals share no facet labels");
  return acc.result();
}

SimilarityScore sim_entities(EntityRef a, EntityRef b, UnmatchedPolicy policy) {
  if (a.index() != b.index()) {
    throw Error(ErrorCode::kKindMismatch, "cannot compare " + std::string(to_string(kind_of(a))) +
                                              " with " + std::string(to_string(kind_of(b))));
  }
  if (auto* o = std::get_if<const FuzzyObject*>(&a)) {
    return sim_object(**o, *std::get<const FuzzyObject*>(b), policy);
  }
  if (auto* i = std::get_if<const FuzzyInstance*>(&a)) {
    return sim_instance(**i, *std::get<const FuzzyInstance*>(b), policy);
  }
  return sim_goal(*std::get<const Goal*>(a), *std::get<const Goal*>(b));
}

SimilarityMatrix similarity_matrix(const KnowledgeBase& kb, EntityKind kind,
                                   UnmatchedPolicy policy) {
  const auto entities = kb.entities(kind);
  if (entities.empty()) {
    throw Error(ErrorCode::kEmptyKind, "knowledge base has no " + std::string(to_string(kind)));
  }
  const std::size_t n = entities.size();
  SimilarityMatrix m;
  m.kind = kind;
  m.cells.assign(n, std::vector<MatrixCell>(n));
  for (std::size_t i = 0; i < n; ++i) {
    m.names.push_back(name_of(entities[i]));
    m.cells[i][i].score = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      MatrixCell cell;
      try {
        const SimilarityScore s = sim_entities(entities[i], entities[j], policy);
        cell.score = s.value;
        cell.warning = s.mixed_necessity;
      } catch (const Error& e) {
        cell.score = 0.0;
        cell.warning = true;
        cell.error = e.code();
      }
      m.cells[i][j] = cell;
      m.cells[j][i] = cell;
    }
  }
  return m;
}

}  // namespace fuzzynet
