// Applies object-NoSQL mapper semantics to one snapshot's class declarations:
// entity detection, inheritance resolution, attribute filtering,
// denormalization classification and the Schema-LoC size proxy.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schemev/source_model.hpp"

namespace schemev {

enum class MapperDialect { Objectify, Morphia, Auto };

const char* to_string(MapperDialect dialect);
std::optional<MapperDialect> dialect_from_string(std::string_view name);

// Exclusion vocabularies active for one snapshot. `Auto` resolves by
// inspecting import statements; when both mappers appear, both apply.
struct VocabularySet {
  bool objectify = false;
  bool morphia = false;

  std::string label() const;  // "objectify", "morphia", "objectify+morphia", "none"
};

enum class AttrOrigin { Declared, Inherited };

struct SchemaAttribute {
  std::string name;
  std::string canonical_type;
  std::vector<AnnotationUse> annotations;  // exclusion markers filtered out
  std::optional<std::string> initializer_text;
  AttrOrigin origin = AttrOrigin::Declared;
  std::string origin_class;  // declaring class when inherited

  bool operator==(const SchemaAttribute&) const = default;
};

enum class DenormReason { ContainerType, NestedEntityType, UnknownType };

const char* to_string(DenormReason reason);

struct DenormVerdict {
  bool denormalized = false;
  std::vector<DenormReason> reasons;  // sorted, unique; empty iff normalized

  bool operator==(const DenormVerdict&) const = default;
};

enum class DetectionBasis { EntityAnnotation, InheritedEntityAnnotation, IdFallback };

const char* to_string(DetectionBasis basis);

struct EntityClass {
  std::string qualified_name;
  std::string source_path;
  std::vector<SchemaAttribute> attributes;
  DenormVerdict verdict;
  long schema_loc = 0;
  std::vector<std::string> super_chain;  // in-snapshot superclasses, nearest first
  DetectionBasis detection_basis = DetectionBasis::EntityAnnotation;

  bool operator==(const EntityClass&) const = default;
};

struct IndexedClass {
  const ClassDecl* decl = nullptr;
  const SourceFile* file = nullptr;
};

// Immutable lookup structure over every class declaration (including nested
// ones) of a snapshot. The indexed SourceFiles must outlive the index.
class SnapshotClassIndex {
 public:
  static SnapshotClassIndex build(const std::vector<const SourceFile*>& files,
                                  std::vector<std::string>* diagnostics);

  const IndexedClass* find(const std::string& qualified_name) const;
  const std::map<std::string, IndexedClass>& classes() const { return classes_; }

  // Resolves a type name (already stripped of generics/arrays) from the
  // context of `from`: same package, then explicit imports, then a unique
  // simple-name match. Ambiguity yields nullopt plus a diagnostic.
  std::optional<std::string> resolve_type_name(
      const std::string& name, const SourceFile& from,
      std::vector<std::string>* diagnostics) const;

  // True when any file of the snapshot imports an Objectify or Morphia
  // package; gates the @Id detection fallback.
  bool has_mapper_import() const { return saw_objectify_ || saw_morphia_; }
  bool has_objectify_import() const { return saw_objectify_; }
  bool has_morphia_import() const { return saw_morphia_; }

 private:
  std::map<std::string, IndexedClass> classes_;
  std::multimap<std::string, std::string> by_simple_name_;
  bool saw_objectify_ = false;
  bool saw_morphia_ = false;
};

VocabularySet resolve_vocabularies(MapperDialect dialect,
                                   const SnapshotClassIndex& index);

// Entity detection: @Entity on the class or an in-snapshot superclass, or an
// @Id-annotated field (declared or inherited) when a mapper import is
// present. Interfaces never qualify. Attributes, verdict and schema_loc are
// left unfilled.
std::vector<EntityClass> detect_entity_classes(
    const SnapshotClassIndex& index, MapperDialect dialect,
    std::vector<std::string>* diagnostics);

// Union of own and inherited fields with most-derived shadowing; static,
// transient, @Ignore (Objectify) and @Transient (Morphia) fields excluded.
std::vector<SchemaAttribute> resolve_schema_attributes(
    const EntityClass& entity, const SnapshotClassIndex& index,
    const VocabularySet& vocabulary);

// Type cascade per attribute: primitive whitelist, container/array,
// in-snapshot class, otherwise conservative unknownType.
DenormVerdict classify_denormalization(const EntityClass& entity,
                                       const SnapshotClassIndex& index,
                                       const std::set<std::string>& entity_names,
                                       std::vector<std::string>* diagnostics);

// Own code lines plus every in-snapshot superclass's code lines. Shared
// superclasses count once per inheriting entity.
long compute_schema_loc(const EntityClass& entity,
                        const SnapshotClassIndex& index);

// Full extraction over one snapshot, sorted by qualified name.
std::vector<EntityClass> extract_entities(const SnapshotClassIndex& index,
                                          MapperDialect dialect,
                                          std::vector<std::string>* diagnostics);

// Exposed for tests: the primitive/boxed/String whitelist and the container
// head set used by classify_denormalization.
bool is_whitelisted_atomic_type(const std::string& canonical_type);
bool is_container_type(const std::string& canonical_type);

}  // namespace schemev
