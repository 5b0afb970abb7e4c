#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>

namespace testsupport {

using schemev::AnnotationUse;
using schemev::ChangeKind;
using schemev::EntityClass;
using schemev::SchemaAttribute;
using schemev::SchemaChange;
using schemev::SchemaSnapshot;

namespace {

// (type, init-or-sentinel, sorted annotation renderings) per attribute name
struct AttrTuple {
  std::string type;
  std::string init;  // "\x01" marks "no initializer"
  std::map<std::string, std::vector<std::string>> annotations;

  bool operator==(const AttrTuple&) const = default;
};

constexpr const char* kNoInit = "\x01";

std::map<std::string, std::map<std::string, AttrTuple>> flatten(
    const SchemaSnapshot& snapshot) {
  std::map<std::string, std::map<std::string, AttrTuple>> tuples;
  for (const auto& [qname, entity] : snapshot.entities) {
    auto& attrs = tuples[qname];
    for (const auto& attr : entity.attributes) {
      AttrTuple tuple;
      tuple.type = attr.canonical_type;
      tuple.init = attr.initializer_text ? *attr.initializer_text : kNoInit;
      for (const auto& anno : attr.annotations)
        tuple.annotations[anno.simple_name].push_back(
            schemev::render_annotation(anno));
      for (auto& [name, renderings] : tuple.annotations)
        std::sort(renderings.begin(), renderings.end());
      attrs[attr.name] = std::move(tuple);
    }
  }
  return tuples;
}

std::string join_bar(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "|";
    out += p;
  }
  return out;
}

}  // namespace

std::vector<SchemaChange> oracle_diff(const SchemaSnapshot& prev,
                                      const SchemaSnapshot& next) {
  auto before = flatten(prev);
  auto after = flatten(next);

  std::vector<SchemaChange> events;
  auto emit = [&](ChangeKind kind, const std::string& entity,
                  std::optional<std::string> attribute = {},
                  std::optional<std::string> detail_before = {},
                  std::optional<std::string> detail_after = {}) {
    SchemaChange change;
    change.commit_hash = next.commit.hash;
    change.commit_index = next.index;
    change.kind = kind;
    change.entity = entity;
    change.attribute = std::move(attribute);
    change.detail_before = std::move(detail_before);
    change.detail_after = std::move(detail_after);
    events.push_back(std::move(change));
  };

  for (const auto& [entity, attrs] : after)
    if (!before.count(entity)) emit(ChangeKind::EntityAdded, entity);
  for (const auto& [entity, attrs] : before)
    if (!after.count(entity)) emit(ChangeKind::EntityRemoved, entity);

  for (const auto& [entity, after_attrs] : after) {
    auto before_it = before.find(entity);
    if (before_it == before.end()) continue;
    const auto& before_attrs = before_it->second;

    for (const auto& [name, tuple] : after_attrs)
      if (!before_attrs.count(name))
        emit(ChangeKind::AttributeAdded, entity, name);
    for (const auto& [name, tuple] : before_attrs)
      if (!after_attrs.count(name))
        emit(ChangeKind::AttributeRemoved, entity, name);

    for (const auto& [name, b] : before_attrs) {
      auto a_it = after_attrs.find(name);
      if (a_it == after_attrs.end()) continue;
      const AttrTuple& a = a_it->second;
      if (b.type != a.type)
        emit(ChangeKind::AttributeTypeChanged, entity, name, b.type, a.type);
      if (b.init != a.init)
        emit(ChangeKind::AttributeInitializationChanged, entity, name,
             b.init == kNoInit ? "" : b.init, a.init == kNoInit ? "" : a.init);
      std::set<std::string> names;
      for (const auto& [anno, _] : b.annotations) names.insert(anno);
      for (const auto& [anno, _] : a.annotations) names.insert(anno);
      for (const auto& anno : names) {
        auto bi = b.annotations.find(anno);
        auto ai = a.annotations.find(anno);
        std::string b_text = bi == b.annotations.end() ? "" : join_bar(bi->second);
        std::string a_text = ai == a.annotations.end() ? "" : join_bar(ai->second);
        if (b_text != a_text)
          emit(ChangeKind::AttributeAnnotationChanged, entity, name, b_text,
               a_text);
      }
    }
  }

  std::sort(events.begin(), events.end(),
            [](const SchemaChange& x, const SchemaChange& y) {
              auto key = [](const SchemaChange& c) {
                return std::make_tuple(c.entity, c.attribute.value_or(""),
                                       static_cast<int>(c.kind),
                                       c.detail_before.value_or(""),
                                       c.detail_after.value_or(""));
              };
              return key(x) < key(y);
            });
  return events;
}

std::vector<SchemaSnapshot> make_random_history(std::uint32_t seed,
                                                int n_commits,
                                                int max_entities) {
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

  const std::vector<std::string> types = {
      "String", "int",  "Long",          "Date",
      "List<Mission>", "Mission", "Map<String,Long>", "double"};
  const std::vector<std::string> inits = {"0", "null", "new ArrayList<>()",
                                          "\"x\""};
  const std::vector<std::string> annos = {"Id", "Index", "AlsoLoad", "Min"};

  std::map<std::string, EntityClass> state;

  auto random_attribute = [&](const std::string& name) {
    SchemaAttribute attr;
    attr.name = name;
    attr.canonical_type = types[static_cast<std::size_t>(pick(static_cast<int>(types.size())))];
    if (pick(3) == 0)
      attr.initializer_text = inits[static_cast<std::size_t>(pick(static_cast<int>(inits.size())))];
    if (pick(2) == 0) {
      AnnotationUse anno;
      anno.simple_name = annos[static_cast<std::size_t>(pick(static_cast<int>(annos.size())))];
      anno.raw_name = anno.simple_name;
      if (pick(2) == 0) anno.args_text = "\"v" + std::to_string(pick(5)) + "\"";
      attr.annotations.push_back(std::move(anno));
    }
    return attr;
  };

  auto mutate = [&] {
    int op = pick(6);
    if (op == 0 && static_cast<int>(state.size()) < max_entities) {
      std::string name = "m.E" + std::to_string(pick(max_entities));
      if (!state.count(name)) {
        EntityClass entity;
        entity.qualified_name = name;
        int n_attrs = pick(4);
        for (int a = 0; a < n_attrs; ++a)
          entity.attributes.push_back(random_attribute("a" + std::to_string(a)));
        state[name] = std::move(entity);
        return;
      }
    }
    if (state.empty()) return;
    auto it = state.begin();
    std::advance(it, pick(static_cast<int>(state.size())));
    EntityClass& entity = it->second;
    switch (op) {
      case 1:
        state.erase(it);
        return;
      case 2: {  // add attribute
        std::string name = "a" + std::to_string(pick(6));
        for (const auto& attr : entity.attributes)
          if (attr.name == name) return;
        entity.attributes.push_back(random_attribute(name));
        return;
      }
      case 3: {  // remove attribute
        if (entity.attributes.empty()) return;
        entity.attributes.erase(entity.attributes.begin() +
                                pick(static_cast<int>(entity.attributes.size())));
        return;
      }
      case 4: {  // retype / reinit
        if (entity.attributes.empty()) return;
        SchemaAttribute& attr =
            entity.attributes[static_cast<std::size_t>(pick(static_cast<int>(entity.attributes.size())))];
        if (pick(2) == 0)
          attr.canonical_type = types[static_cast<std::size_t>(pick(static_cast<int>(types.size())))];
        else if (attr.initializer_text && pick(2) == 0)
          attr.initializer_text.reset();
        else
          attr.initializer_text = inits[static_cast<std::size_t>(pick(static_cast<int>(inits.size())))];
        return;
      }
      case 5: {  // toggle an annotation
        if (entity.attributes.empty()) return;
        SchemaAttribute& attr =
            entity.attributes[static_cast<std::size_t>(pick(static_cast<int>(entity.attributes.size())))];
        if (!attr.annotations.empty() && pick(2) == 0)
          attr.annotations.pop_back();
        else {
          AnnotationUse anno;
          anno.simple_name = annos[static_cast<std::size_t>(pick(static_cast<int>(annos.size())))];
          anno.raw_name = anno.simple_name;
          if (pick(2) == 0) anno.args_text = std::to_string(pick(9));
          attr.annotations.push_back(std::move(anno));
        }
        return;
      }
      default:
        return;
    }
  };

  std::vector<SchemaSnapshot> history;
  for (int commit = 0; commit < n_commits; ++commit) {
    int n_mutations = pick(5);
    for (int m = 0; m < n_mutations; ++m) mutate();
    SchemaSnapshot snapshot;
    snapshot.index = commit;
    snapshot.commit.hash = "rnd-" + std::to_string(commit);
    snapshot.commit.committer_date = "1970-01-01T00:00:00+00:00";
    snapshot.entities = state;
    history.push_back(std::move(snapshot));
  }
  return history;
}

}  // namespace testsupport
