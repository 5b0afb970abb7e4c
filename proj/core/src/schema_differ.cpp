#include "schemev/schema_differ.hpp"

#include <algorithm>

#include "schemev/errors.hpp"
#include "schemev/java_parser.hpp"

namespace schemev {

namespace {

// annotation comparison state for one attribute: simple name -> rendered
// forms, sorted (repeated annotations are rare but legal)
std::map<std::string, std::vector<std::string>> annotation_state(
    const SchemaAttribute& attr) {
  std::map<std::string, std::vector<std::string>> state;
  for (const auto& anno : attr.annotations)
    state[anno.simple_name].push_back(render_annotation(anno));
  for (auto& [name, renderings] : state)
    std::sort(renderings.begin(), renderings.end());
  return state;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "|";
    out += p;
  }
  return out;
}

int kind_rank(ChangeKind kind) { return static_cast<int>(kind); }

void sort_changes(std::vector<SchemaChange>& changes) {
  std::stable_sort(changes.begin(), changes.end(),
                   [](const SchemaChange& a, const SchemaChange& b) {
                     if (a.entity != b.entity) return a.entity < b.entity;
                     const std::string& aa = a.attribute.value_or("");
                     const std::string& bb = b.attribute.value_or("");
                     if (aa != bb) return aa < bb;
                     if (a.kind != b.kind) return kind_rank(a.kind) < kind_rank(b.kind);
                     if (a.detail_before != b.detail_before)
                       return a.detail_before < b.detail_before;
                     return a.detail_after < b.detail_after;
                   });
}

}  // namespace

const char* to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::EntityAdded: return "entityAdded";
    case ChangeKind::EntityRemoved: return "entityRemoved";
    case ChangeKind::AttributeAdded: return "attributeAdded";
    case ChangeKind::AttributeRemoved: return "attributeRemoved";
    case ChangeKind::AttributeTypeChanged: return "attributeTypeChanged";
    case ChangeKind::AttributeInitializationChanged:
      return "attributeInitializationChanged";
    case ChangeKind::AttributeAnnotationChanged:
      return "attributeAnnotationChanged";
  }
  return "entityAdded";
}

std::optional<ChangeKind> change_kind_from_string(std::string_view name) {
  for (int i = 0; i < kChangeKindCount; ++i) {
    auto kind = static_cast<ChangeKind>(i);
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

bool is_attribute_kind(ChangeKind kind) {
  return kind != ChangeKind::EntityAdded && kind != ChangeKind::EntityRemoved;
}

bool is_changed_kind(ChangeKind kind) {
  return kind == ChangeKind::AttributeTypeChanged ||
         kind == ChangeKind::AttributeInitializationChanged ||
         kind == ChangeKind::AttributeAnnotationChanged;
}

std::string render_annotation(const AnnotationUse& annotation) {
  if (annotation.args_text)
    return annotation.simple_name + "(" + *annotation.args_text + ")";
  return annotation.simple_name;
}

SchemaSnapshot empty_pre_history_snapshot() {
  SchemaSnapshot snapshot;
  snapshot.index = -1;
  return snapshot;
}

ParsedSnapshot parse_snapshot(const Snapshot& snapshot) {
  ParsedSnapshot parsed;
  parsed.commit = snapshot.commit;
  parsed.index = snapshot.index;
  parsed.files.reserve(snapshot.files.size());
  for (const auto& [path, content] : snapshot.files) {
    ParsedFile entry;
    entry.path = path;
    try {
      ParseResult result = parse_source(*content, path);
      entry.file = std::make_shared<const SourceFile>(std::move(result.file));
      entry.diagnostics = std::move(result.diagnostics);
    } catch (const ParseFailure& failure) {
      entry.diagnostics.push_back(std::string("parse failure: ") +
                                  failure.what());
    }
    parsed.files.push_back(std::move(entry));
  }
  return parsed;
}

SchemaSnapshot SnapshotPipeline::ingest(const ParsedSnapshot& parsed) {
  SchemaSnapshot snapshot;
  snapshot.commit = parsed.commit;
  snapshot.index = parsed.index;

  std::map<std::string, std::shared_ptr<const SourceFile>> current;
  for (const auto& entry : parsed.files) {
    for (const auto& diag : entry.diagnostics)
      snapshot.diagnostics.push_back(diag);
    if (entry.file) {
      current[entry.path] = entry.file;
    } else if (auto it = effective_.find(entry.path); it != effective_.end()) {
      current[entry.path] = it->second;  // carry-forward
      snapshot.diagnostics.push_back(entry.path +
                                     ": using last parsed version");
    }
  }
  effective_ = current;

  std::vector<const SourceFile*> files;
  files.reserve(current.size());
  for (const auto& [path, file] : current) files.push_back(file.get());

  SnapshotClassIndex index =
      SnapshotClassIndex::build(files, &snapshot.diagnostics);
  last_vocab_ = resolve_vocabularies(dialect_, index);
  for (auto& entity : extract_entities(index, dialect_, &snapshot.diagnostics)) {
    std::string key = entity.qualified_name;
    snapshot.entities.emplace(std::move(key), std::move(entity));
  }
  return snapshot;
}

SchemaSnapshot build_schema_snapshot(const Snapshot& snapshot,
                                     MapperDialect dialect) {
  SnapshotPipeline pipeline(dialect);
  return pipeline.ingest(snapshot);
}

std::vector<SchemaChange> diff_snapshots(const SchemaSnapshot& prev,
                                         const SchemaSnapshot& next) {
  std::vector<SchemaChange> changes;
  auto emit = [&](ChangeKind kind, const std::string& entity,
                  std::optional<std::string> attribute = {},
                  std::optional<std::string> before = {},
                  std::optional<std::string> after = {}) {
    SchemaChange change;
    change.commit_hash = next.commit.hash;
    change.commit_index = next.index;
    change.kind = kind;
    change.entity = entity;
    change.attribute = std::move(attribute);
    change.detail_before = std::move(before);
    change.detail_after = std::move(after);
    changes.push_back(std::move(change));
  };

  for (const auto& [qname, entity] : next.entities)
    if (!prev.entities.count(qname)) emit(ChangeKind::EntityAdded, qname);
  for (const auto& [qname, entity] : prev.entities)
    if (!next.entities.count(qname)) emit(ChangeKind::EntityRemoved, qname);

  for (const auto& [qname, next_entity] : next.entities) {
    auto prev_it = prev.entities.find(qname);
    if (prev_it == prev.entities.end()) continue;  // suppression: new entity
    const EntityClass& prev_entity = prev_it->second;

    std::map<std::string, const SchemaAttribute*> prev_attrs, next_attrs;
    for (const auto& attr : prev_entity.attributes) prev_attrs[attr.name] = &attr;
    for (const auto& attr : next_entity.attributes) next_attrs[attr.name] = &attr;

    for (const auto& [name, attr] : next_attrs)
      if (!prev_attrs.count(name)) emit(ChangeKind::AttributeAdded, qname, name);
    for (const auto& [name, attr] : prev_attrs)
      if (!next_attrs.count(name)) emit(ChangeKind::AttributeRemoved, qname, name);

    for (const auto& [name, next_attr] : next_attrs) {
      auto prev_attr_it = prev_attrs.find(name);
      if (prev_attr_it == prev_attrs.end()) continue;  // created this commit
      const SchemaAttribute& before = *prev_attr_it->second;
      const SchemaAttribute& after = *next_attr;

      if (before.canonical_type != after.canonical_type)
        emit(ChangeKind::AttributeTypeChanged, qname, name,
             before.canonical_type, after.canonical_type);
      if (before.initializer_text != after.initializer_text)
        emit(ChangeKind::AttributeInitializationChanged, qname, name,
             before.initializer_text.value_or(""),
             after.initializer_text.value_or(""));

      auto before_state = annotation_state(before);
      auto after_state = annotation_state(after);
      std::set<std::string> names;
      for (const auto& [anno, _] : before_state) names.insert(anno);
      for (const auto& [anno, _] : after_state) names.insert(anno);
      for (const auto& anno : names) {
        auto b = before_state.find(anno);
        auto a = after_state.find(anno);
        std::string b_text = b == before_state.end() ? "" : join(b->second);
        std::string a_text = a == after_state.end() ? "" : join(a->second);
        if (b_text != a_text)
          emit(ChangeKind::AttributeAnnotationChanged, qname, name, b_text,
               a_text);
      }
    }
  }
  sort_changes(changes);
  return changes;
}

}  // namespace schemev
