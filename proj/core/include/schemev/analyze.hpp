// End-to-end analysis: walk the history, build and diff schema snapshots,
// compute metrics, emit the report bundle.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "schemev/report_emitter.hpp"

namespace schemev {

struct RunConfig {
  HistorySource source;
  MapperDialect dialect = MapperDialect::Auto;
  std::filesystem::path output_dir;
  int min_commits_warn = 20;  // histories below this get a caveat, not an error
  int parallelism = 0;        // 0 = hardware concurrency
  bool deterministic_manifest = false;
  std::string project_label;  // empty: derived from the source path
};

// Throws ConfigError on invalid combinations (e.g. output inside the source).
void validate_config(const RunConfig& config);

struct AnalysisResult {
  ReportBundle bundle;
  ChurnStats churn;
  long total_commits = 0;
  long total_changes = 0;
  long n_entities_min = 0;
  long n_entities_max = 0;
};

// Runs the whole pipeline. Per-commit progress and warnings go to
// `progress` when provided. Output is deterministic at any parallelism.
AnalysisResult run_analyze(const RunConfig& config,
                           std::ostream* progress = nullptr);

}  // namespace schemev
