// Builds per-commit schema snapshots from parsed sources and diffs
// consecutive snapshots into the typed change taxonomy.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "schemev/entity_extractor.hpp"
#include "schemev/history_walker.hpp"

namespace schemev {

struct SchemaSnapshot {
  CommitRef commit;
  int index = -1;  // -1 marks the empty pre-history snapshot
  std::map<std::string, EntityClass> entities;
  std::vector<std::string> diagnostics;
};

SchemaSnapshot empty_pre_history_snapshot();

enum class ChangeKind {
  EntityAdded,
  EntityRemoved,
  AttributeAdded,
  AttributeRemoved,
  AttributeTypeChanged,
  AttributeInitializationChanged,
  AttributeAnnotationChanged,
};

inline constexpr int kChangeKindCount = 7;

const char* to_string(ChangeKind kind);
std::optional<ChangeKind> change_kind_from_string(std::string_view name);
bool is_attribute_kind(ChangeKind kind);
bool is_changed_kind(ChangeKind kind);  // type/initialization/annotation

struct SchemaChange {
  std::string commit_hash;
  int commit_index = 0;
  ChangeKind kind = ChangeKind::EntityAdded;
  std::string entity;
  std::optional<std::string> attribute;      // set iff attribute-level
  std::optional<std::string> detail_before;  // set for the changed kinds
  std::optional<std::string> detail_after;

  bool operator==(const SchemaChange&) const = default;
};

// One file's parse outcome within a snapshot.
struct ParsedFile {
  std::string path;
  std::shared_ptr<const SourceFile> file;  // null when the parse failed
  std::vector<std::string> diagnostics;
};

struct ParsedSnapshot {
  CommitRef commit;
  int index = 0;
  std::vector<ParsedFile> files;  // sorted by path
};

// Runs the surface parser over every file; failures become null entries with
// diagnostics. Pure, parallelizable across snapshots.
ParsedSnapshot parse_snapshot(const Snapshot& snapshot);

// Sequential snapshot assembler. Keeps the last successfully parsed version
// of each path so a file that fails to parse at commit k reuses its k-1
// version (carry-forward) until it parses again or disappears.
class SnapshotPipeline {
 public:
  explicit SnapshotPipeline(MapperDialect dialect) : dialect_(dialect) {}

  SchemaSnapshot ingest(const ParsedSnapshot& parsed);
  SchemaSnapshot ingest(const Snapshot& snapshot) {
    return ingest(parse_snapshot(snapshot));
  }

  // Exclusion vocabulary resolved for the most recent snapshot.
  const VocabularySet& last_vocabulary() const { return last_vocab_; }

 private:
  MapperDialect dialect_;
  VocabularySet last_vocab_;
  std::map<std::string, std::shared_ptr<const SourceFile>> effective_;
};

// One-shot build without carry-forward context.
SchemaSnapshot build_schema_snapshot(const Snapshot& snapshot,
                                     MapperDialect dialect);

// Typed diff of consecutive snapshots. Attribute-level events are suppressed
// for entities added or removed in the same diff, and for attributes created
// or dropped in the same diff. Deterministic order: entity, attribute, kind.
std::vector<SchemaChange> diff_snapshots(const SchemaSnapshot& prev,
                                         const SchemaSnapshot& next);

// "AlsoLoad(\"credits\")" — diff detail rendering for annotation events.
std::string render_annotation(const AnnotationUse& annotation);

}  // namespace schemev
