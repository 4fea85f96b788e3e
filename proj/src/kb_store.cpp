#include "fuzzynet/kb_store.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <openssl/sha.h>

namespace fuzzynet {

using nlohmann::json;

namespace {

// Walks a KB-shaped document, recording every problem in `report` and
// building whatever parts are well-formed. Used both for validation and for
// loading, so the two can never disagree.
class Loader {
 public:
  ValidationReport report;

  KnowledgeBase load(const json& doc) {
    KnowledgeBase kb;
    if (!doc.is_object()) {
      error("", "not-an-object", "knowledge base must be a JSON object");
      return kb;
    }
    if (!doc.contains("version")) {
      error("/version", "missing-field", "version is required");
    } else if (!doc["version"].is_number_integer() || doc["version"].get<long long>() != 1) {
      error("/version", "bad-version", "only version 1 is supported");
    }
    if (!doc.contains("name")) {
      error("/name", "missing-field", "name is required");
    } else if (!doc["name"].is_string()) {
      error("/name", "wrong-type", "name must be a string");
    } else {
      kb.name = doc["name"].get<std::string>();
    }

    for_each_entry(doc, "objects", [&](const json& item, const std::string& path) {
      if (auto o = object_entity<FuzzyObject>(item, path)) kb.objects.push_back(std::move(*o));
    });
    for_each_entry(doc, "goals", [&](const json& item, const std::string& path) {
      if (auto g = goal_entity(item, path, std::nullopt)) kb.goals.push_back(std::move(*g));
    });
    for_each_entry(doc, "instances", [&](const json& item, const std::string& path) {
      if (auto i = object_entity<FuzzyInstance>(item, path)) kb.instances.push_back(std::move(*i));
    });

    check_unique_names(kb.objects, "/objects");
    check_unique_names(kb.goals, "/goals");
    check_unique_names(kb.instances, "/instances");
    check_attribute_kinds(kb.objects, "/objects");
    check_attribute_kinds(kb.instances, "/instances");
    check_mixed_necessity(kb);
    check_near_duplicates();
    return kb;
  }

  template <class T>
  std::optional<T> object_entity(const json& item, const std::string& path) {
    if (!item.is_object()) {
      error(path, "wrong-type", "entity must be an object");
      return std::nullopt;
    }
    T entity;
    bool ok = entity_name(item, path, entity.name, entity.display);
    const json* attrs = field(item, path, "attributes");
    if (attrs == nullptr) return std::nullopt;
    if (!attrs->is_array()) {
      error(path + "/attributes", "wrong-type", "attributes must be an array");
      return std::nullopt;
    }
    if (attrs->empty()) {
      error(path + "/attributes", "empty-attributes", "an entity needs at least one attribute");
      ok = false;
    }
    for (std::size_t i = 0; i < attrs->size(); ++i) {
      const std::string apath = path + "/attributes/" + std::to_string(i);
      auto attribute = parse_attribute((*attrs)[i], apath);
      if (!attribute) {
        ok = false;
        continue;
      }
      if (!entity.attributes.emplace(attribute->name, *attribute).second) {
        error(apath, "duplicate-attribute-name",
              "attribute '" + attribute->name.text() + "' appears twice");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return entity;
  }

  std::optional<Goal> goal_entity(const json& item, const std::string& path,
                                  std::optional<GoalOrigin> default_origin) {
    if (!item.is_object()) {
      error(path, "wrong-type", "goal must be an object");
      return std::nullopt;
    }
    Goal goal;
    bool ok = entity_name(item, path, goal.name, goal.display);
    if (item.contains("origin")) {
      const json& origin = item["origin"];
      if (origin == "system") {
        goal.origin = GoalOrigin::kSystem;
      } else if (origin == "user") {
        goal.origin = GoalOrigin::kUser;
      } else {
        error(path + "/origin", "bad-origin", "origin must be \"system\" or \"user\"");
        ok = false;
      }
    } else if (default_origin) {
      goal.origin = *default_origin;
    } else {
      error(path + "/origin", "missing-field", "origin is required");
      ok = false;
    }
    const json* facets = field(item, path, "facets");
    if (facets == nullptr) return std::nullopt;
    if (!facets->is_object()) {
      error(path + "/facets", "wrong-type", "facets must be an object");
      return std::nullopt;
    }
    if (facets->empty()) {
      error(path + "/facets", "empty-facets", "a goal needs at least one facet");
      ok = false;
    }
    for (const auto& [raw, value] : facets->items()) {
      const std::string fpath = path + "/facets/" + raw;
      auto label = parse_label(raw, fpath);
      auto v = parse_value(value, fpath);
      if (!label || !v) {
        ok = false;
        continue;
      }
      if (goal.origin == GoalOrigin::kUser && v->necessary) {
        error(fpath + "/necessary", "user-goal-necessary",
              "user goals carry possible degrees only");
        ok = false;
      }
      if (!goal.facets.emplace(*label, std::move(*v)).second) {
        error(fpath, "duplicate-label", "facet '" + label->text() + "' appears twice");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return goal;
  }

 private:
  std::set<Label> seen_labels_;

  void error(std::string path, std::string code, std::string message) {
    report.errors.push_back({std::move(path), std::move(code), std::move(message)});
  }
  void warning(std::string path, std::string code, std::string message) {
    report.warnings.push_back({std::move(path), std::move(code), std::move(message)});
  }

  template <class Fn>
  void for_each_entry(const json& doc, const char* key, Fn fn) {
    if (!doc.contains(key)) return;
    const json& list = doc[key];
    const std::string path = std::string("/") + key;
    if (!list.is_array()) {
      error(path, "wrong-type", std::string(key) + " must be an array");
      return;
    }
    for (std::size_t i = 0; i < list.size(); ++i) fn(list[i], path + "/" + std::to_string(i));
  }

  const json* field(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) {
      error(path + "/" + key, "missing-field", std::string(key) + " is required");
      return nullptr;
    }
    return &obj[key];
  }

  std::optional<Label> parse_label(const std::string& raw, const std::string& path) {
    try {
      Label label(raw);
      seen_labels_.insert(label);
      return label;
    } catch (const Error&) {
      error(path, "empty-label", "label is empty after trimming");
      return std::nullopt;
    }
  }

  bool entity_name(const json& item, const std::string& path, Label& name, std::string& display) {
    const json* raw = field(item, path, "name");
    if (raw == nullptr) return false;
    if (!raw->is_string()) {
      error(path + "/name", "wrong-type", "name must be a string");
      return false;
    }
    auto label = parse_label(raw->get<std::string>(), path + "/name");
    if (!label) return false;
    name = *label;
    display = raw->get<std::string>();
    if (item.contains("display")) {
      if (item["display"].is_string()) {
        display = item["display"].get<std::string>();
      } else {
        error(path + "/display", "wrong-type", "display must be a string");
        return false;
      }
    }
    return true;
  }

  std::optional<FuzzySet> parse_set(const json& doc, const std::string& path) {
    if (!doc.is_object()) {
      error(path, "wrong-type", "fuzzy set must be an object of label: degree");
      return std::nullopt;
    }
    FuzzySet set;
    bool ok = true;
    for (const auto& [raw, degree] : doc.items()) {
      const std::string epath = path + "/" + raw;
      auto label = parse_label(raw, epath);
      if (!label) {
        ok = false;
        continue;
      }
      if (!degree.is_number()) {
        error(epath, "degree-not-number", "degree must be a number");
        ok = false;
        continue;
      }
      const double d = degree.get<double>();
      if (!(d >= 0.0 && d <= 1.0)) {
        error(epath, "degree-out-of-range", "degree " + format_decimal(d) + " is outside [0, 1]");
        ok = false;
        continue;
      }
      if (set(*label) > 0.0) {
        error(epath, "duplicate-label", "label '" + label->text() + "' appears twice");
        ok = false;
        continue;
      }
      const double q = quantize(d);
      if (q == 0.0) {
        warning(epath, "zero-degree", "entry with degree 0 is dropped");
        continue;
      }
      set.set(*label, Degree(q));
    }
    if (ok && set.empty()) {
      error(path, "empty-fuzzy-set", "fuzzy set has no entry with a positive degree");
      ok = false;
    }
    if (!ok) return std::nullopt;
    return set;
  }

  std::optional<FuzzyValue> parse_value(const json& doc, const std::string& path) {
    if (!doc.is_object()) {
      error(path, "wrong-type", "value must be an object with possible/necessary");
      return std::nullopt;
    }
    const json* possible = field(doc, path, "possible");
    if (possible == nullptr) return std::nullopt;
    auto p = parse_set(*possible, path + "/possible");
    std::optional<FuzzySet> n;
    bool ok = p.has_value();
    if (doc.contains("necessary")) {
      n = parse_set(doc["necessary"], path + "/necessary");
      ok = ok && n.has_value();
    }
    if (!ok) return std::nullopt;
    if (n && !pointwise_leq(*n, *p)) {
      error(path + "/necessary", "necessity-exceeds-possibility",
            "a necessary degree exceeds the possible degree of the same label");
      return std::nullopt;
    }
    return FuzzyValue{std::move(*p), std::move(n)};
  }

  std::optional<Attribute> parse_attribute(const json& doc, const std::string& path) {
    if (!doc.is_object()) {
      error(path, "wrong-type", "attribute must be an object");
      return std::nullopt;
    }
    const json* raw_name = field(doc, path, "name");
    const json* kind = field(doc, path, "kind");
    if (raw_name == nullptr || kind == nullptr) return std::nullopt;
    if (!raw_name->is_string()) {
      error(path + "/name", "wrong-type", "name must be a string");
      return std::nullopt;
    }
    auto name = parse_label(raw_name->get<std::string>(), path + "/name");
    if (!name) return std::nullopt;

    if (*kind == "simple") {
      auto value = parse_value(doc, path);
      if (!value) return std::nullopt;
      return Attribute::simple(*name, std::move(*value));
    }
    if (*kind == "composite") {
      const json* values = field(doc, path, "values");
      if (values == nullptr) return std::nullopt;
      if (!values->is_object()) {
        error(path + "/values", "wrong-type", "values must be an object");
        return std::nullopt;
      }
      if (values->empty()) {
        error(path + "/values", "empty-composite", "a composite attribute needs a value");
        return std::nullopt;
      }
      std::map<Label, FuzzyValue> parsed;
      bool ok = true;
      for (const auto& [raw, value] : values->items()) {
        const std::string vpath = path + "/values/" + raw;
        auto label = parse_label(raw, vpath);
        auto v = parse_value(value, vpath);
        if (!label || !v) {
          ok = false;
          continue;
        }
        if (!parsed.emplace(*label, std::move(*v)).second) {
          error(vpath, "duplicate-label", "value '" + label->text() + "' appears twice");
          ok = false;
        }
      }
      if (!ok) return std::nullopt;
      return Attribute::composite(*name, std::move(parsed));
    }
    error(path + "/kind", "bad-kind", "kind must be \"simple\" or \"composite\"");
    return std::nullopt;
  }

  template <class T>
  void check_unique_names(const std::vector<T>& entities, const std::string& path) {
    std::set<Label> names;
    for (std::size_t i = 0; i < entities.size(); ++i) {
      if (!names.insert(entities[i].name).second) {
        error(path + "/" + std::to_string(i) + "/name", "duplicate-entity-name",
              "name '" + entities[i].name.text() + "' is already used");
      }
    }
  }

  template <class T>
  void check_attribute_kinds(const std::vector<T>& entities, const std::string& path) {
    std::map<Label, AttributeKind> kinds;
    for (std::size_t i = 0; i < entities.size(); ++i) {
      for (const auto& [name, attribute] : entities[i].attributes) {
        auto [it, inserted] = kinds.emplace(name, attribute.kind);
        if (!inserted && it->second != attribute.kind) {
          error(path + "/" + std::to_string(i), "attribute-kind-conflict",
                "attribute '" + name.text() + "' is simple in one entity and composite in another");
        }
      }
    }
  }

  // Values at the same attribute path that carry necessary degrees in some
  // entities and not in others will be compared possible-only.
  void check_mixed_necessity(const KnowledgeBase& kb) {
    std::map<std::string, std::pair<bool, bool>> seen;  // path -> (with, without)
    auto note = [&](const std::string& key, const FuzzyValue& v) {
      auto& slot = seen[key];
      (v.necessary ? slot.first : slot.second) = true;
    };
    auto note_attributes = [&](const std::string& prefix, const AttributeMap& attributes) {
      for (const auto& [name, a] : attributes) {
        if (a.kind == AttributeKind::kSimple) {
          note(prefix + name.text(), a.value);
        } else {
          for (const auto& [sub, v] : a.values) note(prefix + name.text() + "/" + sub.text(), v);
        }
      }
    };
    for (const auto& o : kb.objects) note_attributes("/objects/", o.attributes);
    for (const auto& i : kb.instances) note_attributes("/instances/", i.attributes);
    for (const auto& g : kb.goals) {
      if (g.origin != GoalOrigin::kSystem) continue;
      for (const auto& [facet, v] : g.facets) note("/goals/" + facet.text(), v);
    }
    for (const auto& [key, slot] : seen) {
      if (slot.first && slot.second) {
        warning(key, "mixed-necessity",
                "some entities give necessary degrees here and others do not");
      }
    }
  }

  void check_near_duplicates() {
    for (const Label& label : seen_labels_) {
      const std::string& t = label.text();
      if (t.size() < 2 || t.back() != 's') continue;
      const Label stem = Label(t.substr(0, t.size() - 1));
      if (seen_labels_.count(stem) != 0) {
        warning("", "near-duplicate-labels",
                "labels '" + stem.text() + "' and '" + t + "' differ only by a trailing 's'");
      }
    }
  }
};

json set_to_json(const FuzzySet& set) {
  json out = json::object();
  for (const auto& [label, degree] : set) out[label.text()] = json_number(degree.value());
  return out;
}

json value_to_json(const FuzzyValue& value) {
  json out = {{"possible", set_to_json(value.possible)}};
  if (value.necessary) out["necessary"] = set_to_json(*value.necessary);
  return out;
}

json attributes_to_json(const AttributeMap& attributes) {
  json out = json::array();
  for (const auto& [name, a] : attributes) {
    json item = {{"name", name.text()}, {"kind", std::string(to_string(a.kind))}};
    if (a.kind == AttributeKind::kSimple) {
      item.update(value_to_json(a.value));
    } else {
      json values = json::object();
      for (const auto& [sub, v] : a.values) values[sub.text()] = value_to_json(v);
      item["values"] = std::move(values);
    }
    out.push_back(std::move(item));
  }
  return out;
}

void put_name(json& out, const Label& name, const std::string& display) {
  out["name"] = name.text();
  if (!display.empty() && display != name.text()) out["display"] = display;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

json parse_json(std::string_view source, const char* what) {
  try {
    return json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string(what) + ": " + e.what());
  }
}

std::string timestamp_now() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

[[noreturn]] void partition_error(const std::string& message) {
  throw Error(ErrorCode::kParseError, "partition: " + message);
}

}  // namespace

bool ValidationReport::has_error(std::string_view code) const {
  for (const auto& e : errors) {
    if (e.code == code) return true;
  }
  return false;
}

bool ValidationReport::has_warning(std::string_view code) const {
  for (const auto& w : warnings) {
    if (w.code == code) return true;
  }
  return false;
}

ValidationError::ValidationError(ValidationReport report)
    : Error(ErrorCode::kValidationError,
            report.errors.empty()
                ? std::string("knowledge base is invalid")
                : report.errors.front().code + " at " + report.errors.front().path + ": " +
                      report.errors.front().message),
      report_(std::move(report)) {}

ValidationReport validate_kb(const json& document) {
  Loader loader;
  loader.load(document);
  return loader.report;
}

KnowledgeBase load_kb(std::string_view source) {
  const json doc = parse_json(source, "knowledge base");
  Loader loader;
  KnowledgeBase kb = loader.load(doc);
  if (!loader.report.ok()) throw ValidationError(std::move(loader.report));
  kb.fingerprint = compute_fingerprint(kb);
  return kb;
}

KnowledgeBase load_kb_file(const std::string& path) { return load_kb(read_file(path)); }

json json_number(double value) {
  const double q = quantize(value);
  if (std::floor(q) == q && std::abs(q) < 1e15) return json(static_cast<long long>(q));
  return json(q);
}

std::string format_decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", value);
  std::string out = buf;
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (out == "-0") out = "0";
  return out;
}

json entity_to_json(EntityRef entity) {
  json out = json::object();
  if (const auto* g = std::get_if<const Goal*>(&entity)) {
    put_name(out, (*g)->name, (*g)->display);
    out["origin"] = std::string(to_string((*g)->origin));
    json facets = json::object();
    for (const auto& [facet, v] : (*g)->facets) facets[facet.text()] = value_to_json(v);
    out["facets"] = std::move(facets);
  } else if (const auto* o = std::get_if<const FuzzyObject*>(&entity)) {
    put_name(out, (*o)->name, (*o)->display);
    out["attributes"] = attributes_to_json((*o)->attributes);
  } else {
    const auto* i = std::get<const FuzzyInstance*>(entity);
    put_name(out, i->name, i->display);
    out["attributes"] = attributes_to_json(i->attributes);
  }
  return out;
}

json entity_to_json(const Entity& entity) { return entity_to_json(entity_ref(entity)); }

Entity entity_from_json(EntityKind kind, const json& document) {
  json doc = document;
  if (doc.is_object() && !doc.contains("name")) doc["name"] = "query";
  Loader loader;
  std::optional<Entity> out;
  switch (kind) {
    case EntityKind::kObjects:
      if (auto o = loader.object_entity<FuzzyObject>(doc, "")) out = std::move(*o);
      break;
    case EntityKind::kInstances:
      if (auto i = loader.object_entity<FuzzyInstance>(doc, "")) out = std::move(*i);
      break;
    case EntityKind::kGoals:
      if (auto g = loader.goal_entity(doc, "", GoalOrigin::kUser)) out = std::move(*g);
      break;
  }
  if (!out || !loader.report.ok()) {
    const auto& e = loader.report.errors.front();
    throw Error(ErrorCode::kInvalidQuery, e.code + " at " + (e.path.empty() ? "/" : e.path) + ": " +
                                              e.message);
  }
  return std::move(*out);
}

json kb_to_json(const KnowledgeBase& kb) {
  json objects = json::array();
  for (const auto& o : kb.objects) objects.push_back(entity_to_json(EntityRef(&o)));
  json goals = json::array();
  for (const auto& g : kb.goals) goals.push_back(entity_to_json(EntityRef(&g)));
  json instances = json::array();
  for (const auto& i : kb.instances) instances.push_back(entity_to_json(EntityRef(&i)));
  return {{"version", kb.version},
          {"name", kb.name},
          {"objects", std::move(objects)},
          {"goals", std::move(goals)},
          {"instances", std::move(instances)}};
}

std::string save_kb(const KnowledgeBase& kb) { return kb_to_json(kb).dump(2) + "\n"; }

std::string compute_fingerprint(const KnowledgeBase& kb) { return sha256_hex(save_kb(kb)); }

json partition_to_json(const Partition& partition) {
  json classes = json::array();
  for (const auto& c : partition.classes) {
    json members = json::array();
    for (const auto& m : c.members) {
      members.push_back({{"name", m.name.text()}, {"score", json_number(m.score)}});
    }
    classes.push_back({{"level", c.level},
                       {"reference", entity_to_json(c.reference.entity)},
                       {"members", std::move(members)}});
  }
  json assignment = json::object();
  for (const auto& [name, level] : partition.assignment) assignment[name.text()] = level;
  json out = {{"kind", std::string(to_string(partition.kind))},
              {"kb_fingerprint", partition.kb_fingerprint},
              {"policy", std::string(to_string(partition.policy))},
              {"classes", std::move(classes)},
              {"assignment", std::move(assignment)}};
  if (partition.pivot) out["pivot"] = partition.pivot->text();
  return out;
}

std::string save_partition(const Partition& partition) {
  return partition_to_json(partition).dump(2) + "\n";
}

Partition load_partition(std::string_view source) {
  const json doc = parse_json(source, "partition");
  if (!doc.is_object()) partition_error("document must be an object");
  Partition p;
  try {
    const auto kind = parse_entity_kind(doc.at("kind").get<std::string>());
    if (!kind) partition_error("unknown kind");
    p.kind = *kind;
    const auto policy = parse_policy(doc.at("policy").get<std::string>());
    if (!policy) partition_error("unknown policy");
    p.policy = *policy;
    p.kb_fingerprint = doc.at("kb_fingerprint").get<std::string>();
    if (doc.contains("pivot")) p.pivot = Label(doc["pivot"].get<std::string>());

    const json& classes = doc.at("classes");
    if (!classes.is_array() || classes.size() != kLevelCount) {
      partition_error("expected exactly four classes");
    }
    std::set<int> levels;
    for (const json& c : classes) {
      const int level = c.at("level").get<int>();
      if (level < 1 || level > kLevelCount) partition_error("class level out of range");
      if (!levels.insert(level).second) partition_error("duplicate class level");
      SimilarityClass& target = p.classes[level - 1];
      target.level = level;
      target.reference.level = level;
      try {
        target.reference.entity = entity_from_json(p.kind, c.at("reference"));
      } catch (const Error& e) {
        partition_error(std::string("bad reference: ") + e.what());
      }
      for (const json& m : c.at("members")) {
        target.members.push_back({Label(m.at("name").get<std::string>()),
                                  m.at("score").get<double>()});
      }
    }
    for (const auto& [name, level] : doc.at("assignment").items()) {
      p.assignment[Label(name)] = level.get<int>();
    }
  } catch (const json::exception& e) {
    partition_error(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    partition_error(e.what());
  }
  return p;
}

Partition load_partition_file(const std::string& path) { return load_partition(read_file(path)); }

Query query_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidQuery, "query must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw Error(ErrorCode::kInvalidQuery, "query needs a kind");
  }
  const auto kind = parse_entity_kind(doc["kind"].get<std::string>());
  if (!kind) throw Error(ErrorCode::kInvalidQuery, "unknown query kind");
  if (!doc.contains("description")) {
    throw Error(ErrorCode::kInvalidQuery, "query needs a description");
  }
  Query q;
  if (doc.contains("label") && doc["label"].is_string()) q.label = doc["label"].get<std::string>();
  q.description = entity_from_json(*kind, doc["description"]);
  validate_query(q);
  return q;
}

Query load_query_file(const std::string& path) {
  return query_from_json(parse_json(read_file(path), "query"));
}

json candidate_to_json(const Candidate& c) {
  return {{"name", c.name.text()}, {"score", json_number(c.score)}, {"level", c.level}};
}

json record_to_json(const ResolutionRecord& r) {
  json skipped = json::array();
  for (const Label& l : r.skipped) skipped.push_back(l.text());
  return {{"query", r.query_label},        {"entity", r.entity.text()},
          {"score", json_number(r.score)}, {"level", r.level},
          {"rejections", r.rejections},    {"evaluations", r.evaluations},
          {"skipped", std::move(skipped)}};
}

json session_to_json(const Session& s) {
  json presented = json::array();
  for (const auto& c : s.presented()) presented.push_back(candidate_to_json(c));
  json reference_scores = json::array();
  for (const auto& v : s.reference_scores()) {
    reference_scores.push_back(v ? json_number(*v) : json(nullptr));
  }
  json skipped = json::array();
  for (const auto& name : s.skipped()) skipped.push_back(name.text());
  return {{"session_id", s.id()},
          {"kind", std::string(to_string(s.query().kind()))},
          {"label", s.query().label},
          {"mode", std::string(to_string(s.mode()))},
          {"state", std::string(to_string(s.state()))},
          {"route", s.route()},
          {"reference_scores", std::move(reference_scores)},
          {"presented", std::move(presented)},
          {"current", s.current() ? candidate_to_json(*s.current()) : json(nullptr)},
          {"accepted", s.accepted() ? candidate_to_json(*s.accepted()) : json(nullptr)},
          {"rejections", s.rejections()},
          {"evaluations", s.evaluations()},
          {"skipped", std::move(skipped)}};
}

std::string session_event_to_line(const SessionEvent& event) {
  json out = {{"event", std::string(to_string(event.type))},
              {"session_id", event.session_id},
              {"timestamp", timestamp_now()},
              {"evaluations", event.evaluations}};
  if (event.candidate) out["candidate"] = candidate_to_json(*event.candidate);
  return out.dump();
}

void SessionLogWriter::operator()(const SessionEvent& event) const {
  *out_ << session_event_to_line(event) << '\n';
  out_->flush();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write to '" + path + "' failed");
}

}  // namespace fuzzynet
