#include "fuzzynet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace fuzzynet {

namespace {

struct AttributeSchema {
  AttributeKind kind = AttributeKind::kSimple;
  std::set<Label> labels;                        // simple
  std::map<Label, std::set<Label>> value_labels;  // composite
};

void collect(const AttributeMap& attributes, std::map<Label, AttributeSchema>& schema) {
  for (const auto& [name, attribute] : attributes) {
    auto [it, inserted] = schema.try_emplace(name);
    AttributeSchema& s = it->second;
    if (inserted) s.kind = attribute.kind;
    // Kind conflicts are rejected at load time; keep the first kind seen.
    if (s.kind != attribute.kind) continue;
    if (attribute.kind == AttributeKind::kSimple) {
      for (const auto& [label, d] : attribute.value.possible) s.labels.insert(label);
    } else {
      for (const auto& [sub, value] : attribute.values) {
        auto& labels = s.value_labels[sub];
        for (const auto& [label, d] : value.possible) labels.insert(label);
      }
    }
  }
}

FuzzySet flat_set(const std::set<Label>& labels, Degree degree) {
  FuzzySet out;
  for (const auto& label : labels) out.set(label, degree);
  return out;
}

AttributeMap reference_attributes(const std::map<Label, AttributeSchema>& schema, Degree degree) {
  AttributeMap out;
  for (const auto& [name, s] : schema) {
    if (s.kind == AttributeKind::kSimple) {
      out.emplace(name, Attribute::simple(name, FuzzyValue{flat_set(s.labels, degree), {}}));
    } else {
      std::map<Label, FuzzyValue> values;
      for (const auto& [sub, labels] : s.value_labels) {
        values.emplace(sub, FuzzyValue{flat_set(labels, degree), {}});
      }
      out.emplace(name, Attribute::composite(name, std::move(values)));
    }
  }
  return out;
}

void sort_members(std::vector<ClassMember>& members) {
  std::sort(members.begin(), members.end(), [](const ClassMember& a, const ClassMember& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  });
}

std::array<ReferenceEntity, kLevelCount> build_references(
    const KnowledgeBase& kb, EntityKind kind, const std::array<SimilarityBand, kLevelCount>& bands) {
  std::array<ReferenceEntity, kLevelCount> refs;
  for (int i = 0; i < kLevelCount; ++i) refs[i] = build_reference_entity(kb, kind, bands[i]);
  return refs;
}

Partition empty_partition(const KnowledgeBase& kb, EntityKind kind, UnmatchedPolicy policy,
                          std::array<ReferenceEntity, kLevelCount> refs) {
  Partition p;
  p.kind = kind;
  p.policy = policy;
  p.kb_fingerprint = kb.fingerprint;
  for (int i = 0; i < kLevelCount; ++i) {
    p.classes[i].level = i + 1;
    p.classes[i].reference = std::move(refs[i]);
  }
  return p;
}

void require_entities(const KnowledgeBase& kb, EntityKind kind) {
  if (kb.count(kind) == 0) {
    throw Error(ErrorCode::kEmptyKind, "knowledge base has no " + std::string(to_string(kind)));
  }
}

}  // namespace

bool SimilarityBand::contains(double score) const {
  // Scores within tolerance below an edge belong to the band above it.
  if (score < lo - kDegreeTolerance) return false;
  return hi_inclusive ? score <= hi + kDegreeTolerance : score < hi - kDegreeTolerance;
}

double SimilarityBand::distance(double score) const {
  if (contains(score)) return 0.0;
  return score < lo ? lo - score : score - hi;
}

std::array<SimilarityBand, kLevelCount> standard_bands() {
  return {{
      {1, 0.0, 0.25, false},
      {2, 0.25, 0.5, false},
      {3, 0.5, 0.75, false},
      {4, 0.75, 1.0, true},
  }};
}

int band_level(double score) {
  for (const auto& band : standard_bands()) {
    if (band.contains(score)) return band.level;
  }
  return score < 0.0 ? 1 : kLevelCount;
}

ReferenceEntity build_reference_entity(const KnowledgeBase& kb, EntityKind kind,
                                       const SimilarityBand& band) {
  require_entities(kb, kind);
  const Degree degree(band.midpoint());
  const Label name("reference-level-" + std::to_string(band.level));

  ReferenceEntity ref;
  ref.level = band.level;
  if (kind == EntityKind::kGoals) {
    std::map<Label, std::set<Label>> facets;
    for (const Goal& g : kb.goals) {
      for (const auto& [facet, value] : g.facets) {
        auto& labels = facets[facet];
        for (const auto& [label, d] : value.possible) labels.insert(label);
      }
    }
    Goal goal;
    goal.name = name;
    goal.display = name.text();
    goal.origin = GoalOrigin::kUser;  // possible degrees only
    for (const auto& [facet, labels] : facets) {
      goal.facets.emplace(facet, FuzzyValue{flat_set(labels, degree), {}});
    }
    ref.entity = std::move(goal);
    return ref;
  }

  std::map<Label, AttributeSchema> schema;
  if (kind == EntityKind::kObjects) {
    for (const auto& o : kb.objects) collect(o.attributes, schema);
    ref.entity = FuzzyObject{name, name.text(), reference_attributes(schema, degree)};
  } else {
    for (const auto& i : kb.instances) collect(i.attributes, schema);
    ref.entity = FuzzyInstance{name, name.text(), reference_attributes(schema, degree)};
  }
  return ref;
}

int resolve_level(const std::array<double, kLevelCount>& scores,
                  const std::array<SimilarityBand, kLevelCount>& bands) {
  int best = -1;
  for (int i = 0; i < kLevelCount; ++i) {
    if (!bands[i].contains(scores[i])) continue;
    if (best < 0 || scores[i] >= scores[best] - kDegreeTolerance) best = i;
  }
  if (best >= 0) return bands[best].level;

  best = 0;
  for (int i = 1; i < kLevelCount; ++i) {
    if (bands[i].distance(scores[i]) <= bands[best].distance(scores[best]) + kDegreeTolerance) {
      best = i;
    }
  }
  return bands[best].level;
}

ClassAssignment assign_class(EntityRef entity,
                             const std::array<ReferenceEntity, kLevelCount>& references,
                             const std::array<SimilarityBand, kLevelCount>& bands,
                             UnmatchedPolicy policy) {
  ClassAssignment out;
  for (int i = 0; i < kLevelCount; ++i) {
    out.scores[i] = sim_entities(entity_ref(references[i].entity), entity, policy).value;
  }
  out.level = resolve_level(out.scores, bands);
  return out;
}

Partition partition_kb(const KnowledgeBase& kb, EntityKind kind, UnmatchedPolicy policy) {
  require_entities(kb, kind);
  const auto bands = standard_bands();
  Partition p = empty_partition(kb, kind, policy, build_references(kb, kind, bands));

  std::array<ReferenceEntity, kLevelCount> refs;
  for (int i = 0; i < kLevelCount; ++i) refs[i] = p.classes[i].reference;

  for (EntityRef e : kb.entities(kind)) {
    const ClassAssignment a = assign_class(e, refs, bands, policy);
    p.classes[a.level - 1].members.push_back({name_of(e), quantize(a.scores[a.level - 1])});
    p.assignment[name_of(e)] = a.level;
  }
  for (auto& c : p.classes) sort_members(c.members);
  return p;
}

Partition partition_by_pivot(const KnowledgeBase& kb, EntityKind kind, const Label& pivot,
                             const std::array<SimilarityBand, kLevelCount>& bands,
                             UnmatchedPolicy policy) {
  const auto pivot_ref = kb.find(kind, pivot);
  if (!pivot_ref) {
    throw Error(ErrorCode::kUnknownPivot, "no " + std::string(to_string(kind)) + " named '" +
                                              pivot.text() + "'");
  }
  Partition p = empty_partition(kb, kind, policy, build_references(kb, kind, bands));
  p.pivot = pivot;

  for (EntityRef e : kb.entities(kind)) {
    double score = 0.0;
    try {
      score = sim_entities(*pivot_ref, e, policy).value;
    } catch (const Error&) {
      // Incomparable with the pivot: treated as dissimilar.
    }
    int level = bands.front().level;
    for (const auto& band : bands) {
      if (band.contains(score)) level = band.level;
    }
    p.classes[level - 1].members.push_back({name_of(e), quantize(score)});
    p.assignment[name_of(e)] = level;
  }
  for (auto& c : p.classes) sort_members(c.members);
  return p;
}

std::array<int, kLevelCount> class_visit_order(int start) {
  const auto bands = standard_bands();
  const double origin = bands.at(start - 1).midpoint();
  std::array<int, kLevelCount> order{1, 2, 3, 4};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = std::abs(bands[a - 1].midpoint() - origin);
    const double db = std::abs(bands[b - 1].midpoint() - origin);
    if (std::abs(da - db) > kDegreeTolerance) return da < db;
    return a > b;
  });
  return order;
}

}  // namespace fuzzynet
