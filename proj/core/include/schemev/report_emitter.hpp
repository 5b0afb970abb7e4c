// Serializes snapshots, changes and metrics into the report bundle:
// trend.csv, changes.csv, dotmatrix.json, treemap.json, distribution.json,
// drilldown.json, summary.json, diagnostics.txt, plus manifest.json.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schemev/metrics.hpp"

namespace schemev {

struct DotMatrixEntry {
  std::string qualified_name;
  DenormVerdict verdict;
};

// Everything the emitter needs, already computed.
struct ReportData {
  std::string project_label;
  std::string dialect_label;                 // configured dialect
  std::vector<SnapshotStats> stats;          // ordered by commit index
  std::vector<TrendPoint> trend;
  std::vector<SchemaChange> changes;         // ordered by commit index
  std::vector<DotMatrixEntry> dot_matrix;    // final snapshot entities
  std::vector<EntityChurn> treemap;          // every entity ever seen
  ChangeDistribution distribution;
  std::map<std::string, ChangeDistribution> distribution_by_dialect;
  Drilldown drilldown;
  ChurnStats churn;
  std::optional<double> correlation;         // entities vs Schema-LoC
  std::vector<std::string> diagnostics;
};

struct ManifestEntry {
  std::string name;
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct ReportBundle {
  std::filesystem::path output_dir;
  std::vector<ManifestEntry> manifest;
  std::string project_label;
  std::string dialect;
  std::string generated_at;  // empty under the deterministic flag
};

// Writes the full bundle. All-or-nothing: on failure every file written so
// far is removed and IoError is thrown. With `deterministic_manifest` the
// manifest carries no timestamp, making reruns byte-identical.
ReportBundle emit_report_bundle(const ReportData& data,
                                const std::filesystem::path& output_dir,
                                bool deterministic_manifest = false);

// Re-parses a changes.csv produced by the emitter (round-trip support).
std::vector<SchemaChange> read_changes_csv(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);

}  // namespace schemev
