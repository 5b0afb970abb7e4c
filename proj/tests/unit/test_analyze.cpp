#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixture_repo.hpp"
#include "schemev/analyze.hpp"
#include "schemev/errors.hpp"

using namespace schemev;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() { return fs::path(SCHEMEV_TEST_DATA_DIR); }

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("schemev_analyze_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

const fs::path& fixture_repo_path() {
  static fs::path path = [] {
    fs::path dir = fresh_dir("repo_fixture");
    testsupport::build_fixture_history(dir);
    return dir;
  }();
  return path;
}

RunConfig snapshot_config(const fs::path& out) {
  RunConfig config;
  config.source.kind = HistoryKind::SnapshotDir;
  config.source.local_path = data_dir() / "snapshots";
  config.output_dir = out;
  config.deterministic_manifest = true;
  return config;
}

}  // namespace

TEST_CASE("snapshot fixture runs end to end") {
  fs::path out = fresh_dir("snap_out");
  std::ostringstream progress;
  AnalysisResult result = run_analyze(snapshot_config(out), &progress);
  CHECK(result.total_commits == 3);
  CHECK(result.total_changes == 4);
  CHECK(result.n_entities_max == 2);
  CHECK(fs::exists(out / "summary.json"));
  // short history logs the tinker caveat
  CHECK(progress.str().find("warning") != std::string::npos);
}

TEST_CASE("fixture repository reports the constructed churn") {
  fs::path out = fresh_dir("repo_out");
  RunConfig config;
  config.source.kind = HistoryKind::VcsRepo;
  config.source.local_path = fixture_repo_path();
  config.dialect = MapperDialect::Objectify;
  config.output_dir = out;
  config.deterministic_manifest = true;
  AnalysisResult result = run_analyze(config, nullptr);
  CHECK(result.total_commits == 25);
  CHECK(result.churn.schema_relevant_commits == 7);
  CHECK(result.churn.churn_rate_pct == doctest::Approx(28.0));
  CHECK(result.total_changes == 16);
  CHECK(result.n_entities_min == 2);
  CHECK(result.n_entities_max == 3);
}

TEST_CASE("parallelism does not change the bundle") {
  fs::path out1 = fresh_dir("jobs1");
  fs::path out4 = fresh_dir("jobs4");
  RunConfig config;
  config.source.kind = HistoryKind::VcsRepo;
  config.source.local_path = fixture_repo_path();
  config.output_dir = out1;
  config.deterministic_manifest = true;
  config.parallelism = 1;
  run_analyze(config, nullptr);
  config.output_dir = out4;
  config.parallelism = 4;
  run_analyze(config, nullptr);
  for (const char* name :
       {"trend.csv", "changes.csv", "dotmatrix.json", "treemap.json",
        "distribution.json", "drilldown.json", "summary.json",
        "diagnostics.txt", "manifest.json"})
    CHECK(slurp(out1 / name) == slurp(out4 / name));
}

TEST_CASE("config validation rejects bad combinations") {
  RunConfig config;
  CHECK_THROWS_AS(validate_config(config), ConfigError);  // no source

  config.source.local_path = data_dir() / "snapshots";
  CHECK_THROWS_AS(validate_config(config), ConfigError);  // no output

  config.output_dir = config.source.local_path;
  CHECK_THROWS_AS(validate_config(config), ConfigError);  // same path

  config.output_dir = fresh_dir("ok_out");
  config.parallelism = -2;
  CHECK_THROWS_AS(validate_config(config), ConfigError);

  config.parallelism = 0;
  CHECK_NOTHROW(validate_config(config));
}

TEST_CASE("missing repositories surface as RepoAccessError") {
  RunConfig config;
  config.source.kind = HistoryKind::VcsRepo;
  config.source.local_path = "/nonexistent/repo";
  config.output_dir = fresh_dir("never");
  CHECK_THROWS_AS(run_analyze(config, nullptr), RepoAccessError);
}

TEST_CASE("project label falls back to the source basename") {
  fs::path out = fresh_dir("label_out");
  AnalysisResult result = run_analyze(snapshot_config(out), nullptr);
  CHECK(result.bundle.project_label == "snapshots");

  fs::path out2 = fresh_dir("label_out2");
  RunConfig config = snapshot_config(out2);
  config.project_label = "custom";
  AnalysisResult named = run_analyze(config, nullptr);
  CHECK(named.bundle.project_label == "custom");
}
