// schemev - mines a repository history and reports how the implicit
// NoSQL schema of its mapper-annotated domain model evolved.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "schemev/analyze.hpp"
#include "schemev/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "schemev: NoSQL schema evolution miner for Objectify/Morphia projects"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand(
      "analyze", "Analyze one repository or snapshot directory");

  std::string repo_path, snapshots_path, before, mapper = "auto", out_dir, label;
  int jobs = 0;
  bool deterministic = false;

  auto* repo_opt =
      analyze->add_option("--repo", repo_path, "Path to a local git repository");
  auto* snap_opt = analyze->add_option(
      "--snapshots", snapshots_path,
      "Path to a snapshot directory fixture (<NNN>_<label>/**.java)");
  repo_opt->excludes(snap_opt);
  snap_opt->excludes(repo_opt);
  analyze->add_option("--before", before,
                      "ISO-8601 cutoff; only commits before this date");
  analyze->add_option("--mapper", mapper,
                      "Mapper dialect: objectify, morphia or auto")
      ->check(CLI::IsMember({"objectify", "morphia", "auto"}));
  analyze->add_option("--out", out_dir, "Report output directory")->required();
  analyze->add_option("--jobs", jobs, "Worker threads (default: hardware)");
  analyze->add_option("--label", label,
                      "Project label in reports (default: source basename)");
  analyze->add_flag("--deterministic", deterministic,
                    "Omit the manifest timestamp for byte-identical reruns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    schemev::RunConfig config;
    if (!repo_path.empty()) {
      config.source.kind = schemev::HistoryKind::VcsRepo;
      config.source.local_path = repo_path;
    } else if (!snapshots_path.empty()) {
      config.source.kind = schemev::HistoryKind::SnapshotDir;
      config.source.local_path = snapshots_path;
    } else {
      throw schemev::ConfigError("one of --repo or --snapshots is required");
    }
    if (!before.empty()) config.source.before_date = before;
    config.dialect = *schemev::dialect_from_string(mapper);
    config.output_dir = out_dir;
    config.parallelism = jobs;
    config.deterministic_manifest = deterministic;
    config.project_label = label;

    schemev::AnalysisResult result = schemev::run_analyze(config, &std::cerr);
    std::cerr << "wrote " << result.bundle.manifest.size() << " report files to "
              << result.bundle.output_dir.string() << " (" << result.total_commits
              << " commits, " << result.total_changes << " schema changes, churn "
              << result.churn.churn_rate_pct << "%)\n";
    return kExitOk;
  } catch (const schemev::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const schemev::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
