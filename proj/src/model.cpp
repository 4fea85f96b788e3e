#include "fuzzynet/model.hpp"

namespace fuzzynet {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <class T>
void append_refs(const std::vector<T>& items, std::vector<EntityRef>& out) {
  for (const auto& item : items) out.emplace_back(&item);
}

}  // namespace

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::kObjects: return "objects";
    case EntityKind::kGoals: return "goals";
    case EntityKind::kInstances: return "instances";
  }
  return "objects";
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
  if (text == "objects") return EntityKind::kObjects;
  if (text == "goals") return EntityKind::kGoals;
  if (text == "instances") return EntityKind::kInstances;
  return std::nullopt;
}

std::string_view to_string(AttributeKind kind) {
  return kind == AttributeKind::kSimple ? "simple" : "composite";
}

std::string_view to_string(GoalOrigin origin) {
  return origin == GoalOrigin::kSystem ? "system" : "user";
}

Attribute Attribute::simple(Label name, FuzzyValue value) {
  Attribute a;
  a.name = std::move(name);
  a.kind = AttributeKind::kSimple;
  a.value = std::move(value);
  return a;
}

Attribute Attribute::composite(Label name, std::map<Label, FuzzyValue> values) {
  Attribute a;
  a.name = std::move(name);
  a.kind = AttributeKind::kComposite;
  a.values = std::move(values);
  return a;
}

EntityRef entity_ref(const Entity& entity) {
  return std::visit([](const auto& e) -> EntityRef { return &e; }, entity);
}

EntityKind kind_of(EntityRef entity) {
  return std::visit(Overloaded{
                        [](const FuzzyObject*) { return EntityKind::kObjects; },
                        [](const FuzzyInstance*) { return EntityKind::kInstances; },
                        [](const Goal*) { return EntityKind::kGoals; },
                    },
                    entity);
}

EntityKind kind_of(const Entity& entity) { return kind_of(entity_ref(entity)); }

const Label& name_of(EntityRef entity) {
  return std::visit([](const auto* e) -> const Label& { return e->name; }, entity);
}

std::vector<EntityRef> KnowledgeBase::entities(EntityKind kind) const {
  std::vector<EntityRef> out;
  switch (kind) {
    case EntityKind::kObjects: append_refs(objects, out); break;
    case EntityKind::kGoals: append_refs(goals, out); break;
    case EntityKind::kInstances: append_refs(instances, out); break;
  }
  return out;
}

std::optional<EntityRef> KnowledgeBase::find(EntityKind kind, const Label& name) const {
  for (EntityRef e : entities(kind)) {
    if (name_of(e) == name) return e;
  }
  return std::nullopt;
}

std::size_t KnowledgeBase::count(EntityKind kind) const {
  switch (kind) {
    case EntityKind::kObjects: return objects.size();
    case EntityKind::kGoals: return goals.size();
    case EntityKind::kInstances: return instances.size();
  }
  return 0;
}

}  // namespace fuzzynet
