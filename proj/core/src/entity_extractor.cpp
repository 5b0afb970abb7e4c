#include "schemev/entity_extractor.hpp"

#include <algorithm>
#include <functional>

namespace schemev {

namespace {

const std::set<std::string> kAtomicWhitelist = {
    "byte",  "short",  "int",     "long",   "float",   "double",
    "boolean", "char", "Byte",    "Short",  "Integer", "Long",
    "Float", "Double", "Boolean", "Character", "String"};

const std::set<std::string> kContainerHeads = {
    "List",     "Set",     "Map",      "Collection", "Queue",
    "Deque",    "ArrayList", "HashSet", "HashMap",   "LinkedList",
    "TreeMap",  "TreeSet", "Iterable"};

bool contains(const std::string& haystack, const char* needle) {
  return haystack.find(needle) != std::string::npos;
}

// "java.util.List<Mission>[]" -> head "java.util.List"
std::string type_head(const std::string& type) {
  auto lt = type.find('<');
  std::string head = lt == std::string::npos ? type : type.substr(0, lt);
  while (head.size() >= 2 && head.ends_with("[]"))
    head.resize(head.size() - 2);
  return head;
}

std::string simple_segment(const std::string& dotted) {
  auto dot = dotted.rfind('.');
  return dot == std::string::npos ? dotted : dotted.substr(dot + 1);
}

bool has_annotation(const std::vector<AnnotationUse>& annos,
                    std::string_view simple) {
  for (const auto& a : annos)
    if (a.simple_name == simple) return true;
  return false;
}

// Walks the extends chain from `start`, resolving within the snapshot.
// Cycles and unresolvable names end the chain (with a diagnostic when a
// sink is provided).
std::vector<std::string> resolve_super_chain(
    const SnapshotClassIndex& index, const std::string& start_qname,
    std::vector<std::string>* diagnostics) {
  std::vector<std::string> chain;
  std::set<std::string> visited{start_qname};
  const IndexedClass* current = index.find(start_qname);
  while (current && current->decl->superclass_name) {
    std::string target = type_head(*current->decl->superclass_name);
    auto resolved = index.resolve_type_name(target, *current->file, diagnostics);
    if (!resolved) {
      if (diagnostics)
        diagnostics->push_back("unresolved superclass '" + target + "' of " +
                               (chain.empty() ? start_qname : chain.back()));
      break;
    }
    if (!visited.insert(*resolved).second) {
      if (diagnostics)
        diagnostics->push_back("inheritance cycle at " + *resolved +
                               " (from " + start_qname + ")");
      break;
    }
    chain.push_back(*resolved);
    current = index.find(*resolved);
  }
  return chain;
}

}  // namespace

const char* to_string(MapperDialect dialect) {
  switch (dialect) {
    case MapperDialect::Objectify: return "objectify";
    case MapperDialect::Morphia: return "morphia";
    case MapperDialect::Auto: return "auto";
  }
  return "auto";
}

std::optional<MapperDialect> dialect_from_string(std::string_view name) {
  if (name == "objectify") return MapperDialect::Objectify;
  if (name == "morphia") return MapperDialect::Morphia;
  if (name == "auto") return MapperDialect::Auto;
  return std::nullopt;
}

std::string VocabularySet::label() const {
  if (objectify && morphia) return "objectify+morphia";
  if (objectify) return "objectify";
  if (morphia) return "morphia";
  return "none";
}

const char* to_string(DenormReason reason) {
  switch (reason) {
    case DenormReason::ContainerType: return "containerType";
    case DenormReason::NestedEntityType: return "nestedEntityType";
    case DenormReason::UnknownType: return "unknownType";
  }
  return "unknownType";
}

const char* to_string(DetectionBasis basis) {
  switch (basis) {
    case DetectionBasis::EntityAnnotation: return "entityAnnotation";
    case DetectionBasis::InheritedEntityAnnotation: return "inheritedEntityAnnotation";
    case DetectionBasis::IdFallback: return "idFallback";
  }
  return "entityAnnotation";
}

SnapshotClassIndex SnapshotClassIndex::build(
    const std::vector<const SourceFile*>& files,
    std::vector<std::string>* diagnostics) {
  SnapshotClassIndex index;
  // deterministic regardless of input order: later we resolve duplicates by
  // path, so first insert everything, smallest path winning
  std::function<void(const ClassDecl&, const SourceFile&)> add =
      [&](const ClassDecl& decl, const SourceFile& file) {
        auto [it, inserted] =
            index.classes_.try_emplace(decl.qualified_name, IndexedClass{&decl, &file});
        if (!inserted) {
          const IndexedClass& kept = it->second;
          if (file.path < kept.file->path) {
            if (diagnostics)
              diagnostics->push_back("duplicate class " + decl.qualified_name +
                                     " in " + kept.file->path + ", keeping " +
                                     file.path);
            it->second = IndexedClass{&decl, &file};
          } else if (diagnostics) {
            diagnostics->push_back("duplicate class " + decl.qualified_name +
                                   " in " + file.path + ", keeping " +
                                   kept.file->path);
          }
        }
        for (const auto& nested : decl.nested) add(nested, file);
      };
  for (const SourceFile* file : files) {
    for (const auto& decl : file->classes) add(decl, *file);
    for (const auto& imp : file->imports) {
      if (contains(imp, "objectify")) index.saw_objectify_ = true;
      if (contains(imp, "morphia")) index.saw_morphia_ = true;
    }
  }
  for (const auto& [qname, entry] : index.classes_)
    index.by_simple_name_.emplace(entry.decl->simple_name, qname);
  return index;
}

const IndexedClass* SnapshotClassIndex::find(
    const std::string& qualified_name) const {
  auto it = classes_.find(qualified_name);
  return it == classes_.end() ? nullptr : &it->second;
}

std::optional<std::string> SnapshotClassIndex::resolve_type_name(
    const std::string& name, const SourceFile& from,
    std::vector<std::string>* diagnostics) const {
  if (name.empty()) return std::nullopt;
  if (name.find('.') != std::string::npos) {
    if (classes_.count(name)) return name;
    if (!from.package_name.empty()) {
      std::string prefixed = from.package_name + "." + name;
      if (classes_.count(prefixed)) return prefixed;
    }
    return std::nullopt;
  }
  // 1) same package
  std::string same_pkg =
      from.package_name.empty() ? name : from.package_name + "." + name;
  if (classes_.count(same_pkg)) return same_pkg;
  // 2) explicit imports
  for (const auto& imp : from.imports) {
    if (imp.ends_with("." + name) && classes_.count(imp)) return imp;
    if (imp.ends_with(".*")) {
      std::string candidate = imp.substr(0, imp.size() - 1) + name;
      if (classes_.count(candidate)) return candidate;
    }
  }
  // 3) unique simple-name match anywhere in the snapshot
  auto [lo, hi] = by_simple_name_.equal_range(name);
  if (lo == hi) return std::nullopt;
  auto second = std::next(lo);
  if (second != hi) {
    if (diagnostics)
      diagnostics->push_back("ambiguous type name '" + name + "' (" +
                             lo->second + ", " + second->second + ", ...)");
    return std::nullopt;
  }
  return lo->second;
}

VocabularySet resolve_vocabularies(MapperDialect dialect,
                                   const SnapshotClassIndex& index) {
  VocabularySet vocab;
  switch (dialect) {
    case MapperDialect::Objectify:
      vocab.objectify = true;
      break;
    case MapperDialect::Morphia:
      vocab.morphia = true;
      break;
    case MapperDialect::Auto:
      vocab.objectify = index.has_objectify_import();
      vocab.morphia = index.has_morphia_import();
      break;
  }
  return vocab;
}

std::vector<EntityClass> detect_entity_classes(
    const SnapshotClassIndex& index, MapperDialect dialect,
    std::vector<std::string>* diagnostics) {
  (void)dialect;  // both mapper vocabularies share @Entity/@Id
  const bool id_fallback_enabled = index.has_mapper_import();
  std::vector<EntityClass> out;
  for (const auto& [qname, entry] : index.classes()) {
    if (entry.decl->kind == ClassKind::Interface) continue;
    std::vector<std::string> chain =
        resolve_super_chain(index, qname, nullptr);

    std::optional<DetectionBasis> basis;
    if (has_annotation(entry.decl->annotations, "Entity")) {
      basis = DetectionBasis::EntityAnnotation;
    } else {
      for (const auto& super : chain) {
        const IndexedClass* sup = index.find(super);
        if (sup && has_annotation(sup->decl->annotations, "Entity")) {
          basis = DetectionBasis::InheritedEntityAnnotation;
          break;
        }
      }
    }
    if (!basis && id_fallback_enabled) {
      auto has_id_field = [&](const ClassDecl& decl) {
        for (const auto& field : decl.fields)
          if (has_annotation(field.annotations, "Id")) return true;
        return false;
      };
      bool found = has_id_field(*entry.decl);
      for (auto it = chain.begin(); !found && it != chain.end(); ++it) {
        const IndexedClass* sup = index.find(*it);
        if (sup) found = has_id_field(*sup->decl);
      }
      if (found) basis = DetectionBasis::IdFallback;
    }
    if (!basis) continue;

    EntityClass entity;
    entity.qualified_name = qname;
    entity.source_path = entry.file->path;
    entity.detection_basis = *basis;
    entity.super_chain = resolve_super_chain(index, qname, diagnostics);
    out.push_back(std::move(entity));
  }
  return out;
}

std::vector<SchemaAttribute> resolve_schema_attributes(
    const EntityClass& entity, const SnapshotClassIndex& index,
    const VocabularySet& vocabulary) {
  auto excluded = [&](const FieldDecl& field) {
    if (field.has_modifier("static") || field.has_modifier("transient"))
      return true;
    if (vocabulary.objectify && has_annotation(field.annotations, "Ignore"))
      return true;
    if (vocabulary.morphia && has_annotation(field.annotations, "Transient"))
      return true;
    return false;
  };
  auto retained_annotations = [&](const std::vector<AnnotationUse>& annos) {
    std::vector<AnnotationUse> kept;
    for (const auto& a : annos) {
      if (vocabulary.objectify && a.simple_name == "Ignore") continue;
      if (vocabulary.morphia && a.simple_name == "Transient") continue;
      kept.push_back(a);
    }
    return kept;
  };

  std::vector<SchemaAttribute> attributes;
  std::set<std::string> seen;
  auto add_from = [&](const std::string& qname, AttrOrigin origin) {
    const IndexedClass* entry = index.find(qname);
    if (!entry) return;
    for (const auto& field : entry->decl->fields) {
      if (!seen.insert(field.name).second) continue;  // shadowed
      if (excluded(field)) continue;
      SchemaAttribute attr;
      attr.name = field.name;
      attr.canonical_type = field.type_text;
      attr.annotations = retained_annotations(field.annotations);
      attr.initializer_text = field.initializer_text;
      attr.origin = origin;
      if (origin == AttrOrigin::Inherited) attr.origin_class = qname;
      attributes.push_back(std::move(attr));
    }
  };
  add_from(entity.qualified_name, AttrOrigin::Declared);
  for (const auto& super : entity.super_chain)
    add_from(super, AttrOrigin::Inherited);
  return attributes;
}

bool is_whitelisted_atomic_type(const std::string& canonical_type) {
  std::string t = canonical_type;
  if (t.starts_with("java.lang.")) t = t.substr(10);
  return kAtomicWhitelist.count(t) > 0;
}

bool is_container_type(const std::string& canonical_type) {
  if (canonical_type.ends_with("[]")) return true;
  return kContainerHeads.count(simple_segment(type_head(canonical_type))) > 0;
}

DenormVerdict classify_denormalization(const EntityClass& entity,
                                       const SnapshotClassIndex& index,
                                       const std::set<std::string>& entity_names,
                                       std::vector<std::string>* diagnostics) {
  std::set<DenormReason> reasons;
  const IndexedClass* self = index.find(entity.qualified_name);
  const SourceFile* context = self ? self->file : nullptr;
  for (const auto& attr : entity.attributes) {
    const std::string& type = attr.canonical_type;
    if (is_whitelisted_atomic_type(type)) continue;
    if (is_container_type(type)) {
      reasons.insert(DenormReason::ContainerType);
      continue;
    }
    std::optional<std::string> resolved;
    if (context)
      resolved = index.resolve_type_name(type_head(type), *context, diagnostics);
    if (resolved) {
      const IndexedClass* target = index.find(*resolved);
      bool nested_entity = entity_names.count(*resolved) > 0;
      bool has_fields = target && !target->decl->fields.empty();
      if (nested_entity || has_fields) {
        reasons.insert(DenormReason::NestedEntityType);
        continue;
      }
    }
    reasons.insert(DenormReason::UnknownType);
  }
  DenormVerdict verdict;
  verdict.reasons.assign(reasons.begin(), reasons.end());
  verdict.denormalized = !verdict.reasons.empty();
  return verdict;
}

long compute_schema_loc(const EntityClass& entity,
                        const SnapshotClassIndex& index) {
  long total = 0;
  const IndexedClass* self = index.find(entity.qualified_name);
  if (self) total += self->decl->code_line_count;
  for (const auto& super : entity.super_chain) {
    const IndexedClass* sup = index.find(super);
    if (sup) total += sup->decl->code_line_count;
  }
  return total;
}

std::vector<EntityClass> extract_entities(const SnapshotClassIndex& index,
                                          MapperDialect dialect,
                                          std::vector<std::string>* diagnostics) {
  VocabularySet vocab = resolve_vocabularies(dialect, index);
  std::vector<EntityClass> entities =
      detect_entity_classes(index, dialect, diagnostics);
  std::set<std::string> names;
  for (const auto& e : entities) names.insert(e.qualified_name);
  for (auto& entity : entities) {
    entity.attributes = resolve_schema_attributes(entity, index, vocab);
    entity.verdict =
        classify_denormalization(entity, index, names, diagnostics);
    entity.schema_loc = compute_schema_loc(entity, index);
  }
  std::sort(entities.begin(), entities.end(),
            [](const EntityClass& a, const EntityClass& b) {
              return a.qualified_name < b.qualified_name;
            });
  return entities;
}

}  // namespace schemev
