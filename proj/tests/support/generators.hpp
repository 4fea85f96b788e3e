#pragma once

// Hand-rolled random generators for property tests. Degrees live on a 0.1
// grid so that every generated value is exactly representable after the
// 9-decimal quantization used by persistence.

#include <random>
#include <string>
#include <vector>

#include "fuzzynet/kb_store.hpp"
#include "fuzzynet/model.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double grid_degree(Rng& rng, int lo_step = 1, int hi_step = 10) {
  return std::uniform_int_distribution<int>(lo_step, hi_step)(rng) / 10.0;
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Random set over labels u0..u{pool-1}; may be empty unless `non_empty`.
inline fuzzynet::FuzzySet fuzzy_set(Rng& rng, int pool = 6, bool non_empty = false) {
  fuzzynet::FuzzySet s;
  for (int i = 0; i < pool; ++i) {
    if (coin(rng)) s.set(fuzzynet::Label("u" + std::to_string(i)), fuzzynet::Degree(grid_degree(rng)));
  }
  if (non_empty && s.empty()) {
    const int i = std::uniform_int_distribution<int>(0, pool - 1)(rng);
    s.set(fuzzynet::Label("u" + std::to_string(i)), fuzzynet::Degree(grid_degree(rng)));
  }
  return s;
}

/// Lowers every degree of `s` by a random number of grid steps (possibly to 0).
inline fuzzynet::FuzzySet scale_down(Rng& rng, const fuzzynet::FuzzySet& s) {
  fuzzynet::FuzzySet out;
  for (const auto& [label, degree] : s) {
    const int steps = static_cast<int>(degree.value() * 10.0 + 0.5);
    const int lower = std::uniform_int_distribution<int>(0, steps)(rng);
    out.set(label, fuzzynet::Degree(lower / 10.0));
  }
  return out;
}

/// Non-empty necessary part bounded by `possible`, or nullopt.
inline std::optional<fuzzynet::FuzzySet> necessary_for(Rng& rng, const fuzzynet::FuzzySet& possible) {
  auto n = scale_down(rng, possible);
  if (n.empty()) return std::nullopt;
  return n;
}

inline fuzzynet::FuzzyValue fuzzy_value(Rng& rng, int pool, double p_necessary) {
  fuzzynet::FuzzyValue v{fuzzy_set(rng, pool, true), std::nullopt};
  if (coin(rng, p_necessary)) v.necessary = necessary_for(rng, v.possible);
  return v;
}

struct KbShape {
  int min_entities = 5;
  int max_entities = 100;
  int label_pool = 8;
  double p_attribute = 0.8;    // chance each optional attribute is present
  double p_necessary = 0.0;
};

inline fuzzynet::AttributeMap attributes(Rng& rng, const KbShape& shape) {
  using namespace fuzzynet;
  AttributeMap out;
  // "objects" is always present so every pair of entities is comparable.
  out.emplace(Label("objects"),
              Attribute::simple(Label("objects"), fuzzy_value(rng, shape.label_pool, shape.p_necessary)));
  if (coin(rng, shape.p_attribute)) {
    out.emplace(Label("shape"),
                Attribute::simple(Label("shape"), fuzzy_value(rng, shape.label_pool, shape.p_necessary)));
  }
  if (coin(rng, shape.p_attribute)) {
    std::map<Label, FuzzyValue> values;
    for (const char* sub : {"to-delete", "to-cut", "to-copy"}) {
      if (coin(rng, 0.7)) values.emplace(Label(sub), fuzzy_value(rng, shape.label_pool, shape.p_necessary));
    }
    if (values.empty()) values.emplace(Label("to-cut"), fuzzy_value(rng, shape.label_pool, shape.p_necessary));
    out.emplace(Label("goals"), Attribute::composite(Label("goals"), std::move(values)));
  }
  return out;
}

inline fuzzynet::KnowledgeBase object_kb(Rng& rng, const KbShape& shape = {}) {
  using namespace fuzzynet;
  KnowledgeBase kb;
  kb.name = "random";
  const int n = std::uniform_int_distribution<int>(shape.min_entities, shape.max_entities)(rng);
  for (int i = 0; i < n; ++i) {
    FuzzyObject o;
    o.name = Label("obj-" + std::to_string(i));
    o.display = o.name.text();
    o.attributes = attributes(rng, shape);
    kb.objects.push_back(std::move(o));
  }
  kb.fingerprint = compute_fingerprint(kb);
  return kb;
}

/// KB with objects, system/user goals and instances, for persistence tests.
inline fuzzynet::KnowledgeBase mixed_kb(Rng& rng) {
  using namespace fuzzynet;
  KbShape shape{2, 8, 6, 0.6, 0.3};
  KnowledgeBase kb = object_kb(rng, shape);
  kb.name = "mixed";
  const int goals = std::uniform_int_distribution<int>(0, 6)(rng);
  for (int i = 0; i < goals; ++i) {
    Goal g;
    g.name = Label("goal-" + std::to_string(i));
    g.display = "Goal " + std::to_string(i);
    g.origin = coin(rng) ? GoalOrigin::kSystem : GoalOrigin::kUser;
    const double p_nec = g.origin == GoalOrigin::kSystem ? 0.5 : 0.0;
    for (const char* facet : {"erase", "select", "move"}) {
      if (coin(rng, 0.6) || g.facets.empty()) g.facets.emplace(Label(facet), fuzzy_value(rng, 5, p_nec));
    }
    kb.goals.push_back(std::move(g));
  }
  const int instances = std::uniform_int_distribution<int>(0, 4)(rng);
  for (int i = 0; i < instances; ++i) {
    FuzzyInstance inst;
    inst.name = Label("inst-" + std::to_string(i));
    inst.display = inst.name.text();
    inst.attributes = attributes(rng, shape);
    kb.instances.push_back(std::move(inst));
  }
  kb.fingerprint = compute_fingerprint(kb);
  return kb;
}

/// Partial object description with possible degrees only.
inline fuzzynet::Query object_query(Rng& rng, const KbShape& shape = {}) {
  using namespace fuzzynet;
  FuzzyObject o;
  o.name = Label("query");
  o.display = "query";
  o.attributes.emplace(Label("objects"),
                       Attribute::simple(Label("objects"), FuzzyValue{fuzzy_set(rng, shape.label_pool, true), {}}));
  if (coin(rng, 0.4)) {
    o.attributes.emplace(Label("shape"),
                         Attribute::simple(Label("shape"), FuzzyValue{fuzzy_set(rng, shape.label_pool, true), {}}));
  }
  return Query{"random query", Entity(std::move(o))};
}

}  // namespace gen
