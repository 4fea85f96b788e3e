#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fuzzynet/fuzzy_set.hpp"

namespace fuzzynet {

enum class EntityKind { kObjects, kGoals, kInstances };

std::string_view to_string(EntityKind kind);
/// Parses "objects" | "goals" | "instances"; nullopt otherwise.
std::optional<EntityKind> parse_entity_kind(std::string_view text);

/// Possible degrees plus optional necessary degrees for the same value.
/// When present, necessary(x) <= possible(x) for every x.
struct FuzzyValue {
  FuzzySet possible;
  std::optional<FuzzySet> necessary;

  friend bool operator==(const FuzzyValue&, const FuzzyValue&) = default;
};

enum class AttributeKind { kSimple, kComposite };

std::string_view to_string(AttributeKind kind);

/// A simple attribute carries one value; a composite one carries a value per
/// sub-label (e.g. a "goals" attribute with one value per goal).
struct Attribute {
  Label name;
  AttributeKind kind = AttributeKind::kSimple;
  FuzzyValue value;                     // simple
  std::map<Label, FuzzyValue> values;   // composite

  static Attribute simple(Label name, FuzzyValue value);
  static Attribute composite(Label name, std::map<Label, FuzzyValue> values);

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

using AttributeMap = std::map<Label, Attribute>;

struct FuzzyObject {
  Label name;
  std::string display;  // raw spelling from the source file
  AttributeMap attributes;

  friend bool operator==(const FuzzyObject&, const FuzzyObject&) = default;
};

struct FuzzyInstance {
  Label name;
  std::string display;
  AttributeMap attributes;

  friend bool operator==(const FuzzyInstance&, const FuzzyInstance&) = default;
};

enum class GoalOrigin { kSystem, kUser };

std::string_view to_string(GoalOrigin origin);

struct Goal {
  Label name;
  std::string display;
  GoalOrigin origin = GoalOrigin::kSystem;
  std::map<Label, FuzzyValue> facets;

  friend bool operator==(const Goal&, const Goal&) = default;
};

/// Owning handle for any entity; used for reference prototypes and queries.
using Entity = std::variant<FuzzyObject, FuzzyInstance, Goal>;
/// Non-owning view of an entity living in a KnowledgeBase or elsewhere.
using EntityRef = std::variant<const FuzzyObject*, const FuzzyInstance*, const Goal*>;

EntityRef entity_ref(const Entity& entity);
EntityKind kind_of(const Entity& entity);
EntityKind kind_of(EntityRef entity);
const Label& name_of(EntityRef entity);

struct KnowledgeBase {
  int version = 1;
  std::string name;
  std::vector<FuzzyObject> objects;
  std::vector<Goal> goals;
  std::vector<FuzzyInstance> instances;
  std::string fingerprint;  // sha-256 hex of the canonical serialization

  /// Entities of one kind in declaration order.
  std::vector<EntityRef> entities(EntityKind kind) const;
  /// Lookup by (normalized) name; nullopt when absent.
  std::optional<EntityRef> find(EntityKind kind, const Label& name) const;
  std::size_t count(EntityKind kind) const;

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

}  // namespace fuzzynet
