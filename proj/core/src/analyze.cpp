#include "schemev/analyze.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "schemev/errors.hpp"
#include "schemev/java_parser.hpp"

namespace fs = std::filesystem;

namespace schemev {

namespace {

// Parse results keyed by blob id + path, shared across commits. Most blobs
// are unchanged between consecutive commits, so real histories parse each
// file version once.
class ParseCache {
 public:
  struct Entry {
    std::shared_ptr<const SourceFile> file;  // null when the parse failed
    std::vector<std::string> diagnostics;
  };

  std::shared_ptr<const Entry> get(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : it->second;
  }

  void put(const std::string& key, std::shared_ptr<const Entry> entry) {
    std::lock_guard lock(mu_);
    map_.emplace(key, std::move(entry));
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const Entry>> map_;
};

std::shared_ptr<const ParseCache::Entry> parse_to_entry(
    const std::string& text, const std::string& path) {
  auto entry = std::make_shared<ParseCache::Entry>();
  try {
    ParseResult result = parse_source(text, path);
    entry->file = std::make_shared<const SourceFile>(std::move(result.file));
    entry->diagnostics = std::move(result.diagnostics);
  } catch (const ParseFailure& failure) {
    entry->diagnostics.push_back(std::string("parse failure: ") +
                                 failure.what());
  }
  return entry;
}

ParsedSnapshot parse_commit_vcs(const HistoryWalker& walker,
                                const CommitRef& commit, int index,
                                ParseCache& cache) {
  ParsedSnapshot parsed;
  parsed.commit = commit;
  parsed.index = index;

  auto entries = walker.list_java_files(commit);
  std::sort(entries.begin(), entries.end(),
            [](const TreeEntry& a, const TreeEntry& b) { return a.path < b.path; });

  std::vector<std::string> missing;
  for (const auto& e : entries)
    if (!cache.get(e.oid + '\0' + e.path)) missing.push_back(e.oid);
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  auto blobs = walker.read_blobs(missing);

  for (const auto& e : entries) {
    std::string key = e.oid + '\0' + e.path;
    auto cached = cache.get(key);
    if (!cached) {
      auto blob = blobs.find(e.oid);
      if (blob == blobs.end()) throw RepoAccessError("missing blob " + e.oid);
      cached = parse_to_entry(*blob->second, e.path);
      cache.put(key, cached);
    }
    ParsedFile file;
    file.path = e.path;
    file.file = cached->file;
    file.diagnostics = cached->diagnostics;
    parsed.files.push_back(std::move(file));
  }
  return parsed;
}

ParsedSnapshot parse_commit(const HistoryWalker& walker, const CommitRef& commit,
                            int index, ParseCache& cache) {
  if (walker.is_vcs()) return parse_commit_vcs(walker, commit, index, cache);
  return parse_snapshot(walker.materialize_snapshot(commit, index));
}

std::string derive_label(const fs::path& source_path) {
  fs::path normal = source_path.lexically_normal();
  std::string name = normal.filename().string();
  if (name.empty() || name == "." || name == "..") {
    std::error_code ec;
    fs::path abs = fs::weakly_canonical(source_path, ec);
    if (!ec) name = abs.filename().string();
  }
  return name.empty() ? "project" : name;
}

std::string short_hash(const std::string& hash) {
  return hash.size() > 10 ? hash.substr(0, 10) : hash;
}

}  // namespace

void validate_config(const RunConfig& config) {
  if (config.source.local_path.empty())
    throw ConfigError("history source path is required");
  if (config.output_dir.empty()) throw ConfigError("output directory is required");
  if (config.parallelism < 0) throw ConfigError("parallelism must be >= 1");
  if (config.min_commits_warn < 0)
    throw ConfigError("minimum-commit warning threshold must be >= 0");
  std::error_code ec;
  fs::path src = fs::weakly_canonical(config.source.local_path, ec);
  fs::path out = fs::weakly_canonical(config.output_dir, ec);
  if (src == out)
    throw ConfigError("output directory must be distinct from the source");
}

AnalysisResult run_analyze(const RunConfig& config, std::ostream* progress) {
  validate_config(config);

  HistoryWalker walker(config.source);
  std::vector<CommitRef> commits = walker.linearize_history();
  const std::size_t n_commits = commits.size();

  if (progress && static_cast<long>(n_commits) < config.min_commits_warn)
    *progress << "warning: history has only " << n_commits << " commits (< "
              << config.min_commits_warn
              << "); tiny histories tend to be tinker projects\n";

  unsigned jobs = config.parallelism > 0
                      ? static_cast<unsigned>(config.parallelism)
                      : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(n_commits, 1));

  ParseCache cache;

  // parallel parse, ordered consumption
  std::mutex mu;
  std::condition_variable cv_space, cv_ready;
  std::map<std::size_t, ParsedSnapshot> ready;
  std::size_t next_to_claim = 0;
  std::size_t next_to_consume = 0;
  const std::size_t window = jobs * 2 + 2;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      std::size_t index;
      {
        std::unique_lock lock(mu);
        cv_space.wait(lock, [&] {
          return failure || next_to_claim >= n_commits ||
                 next_to_claim < next_to_consume + window;
        });
        if (failure || next_to_claim >= n_commits) return;
        index = next_to_claim++;
      }
      try {
        ParsedSnapshot parsed =
            parse_commit(walker, commits[index], static_cast<int>(index), cache);
        std::lock_guard lock(mu);
        ready.emplace(index, std::move(parsed));
        cv_ready.notify_all();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        cv_ready.notify_all();
        cv_space.notify_all();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);

  // sequential phase state
  SnapshotPipeline pipeline(config.dialect);
  SchemaSnapshot previous = empty_pre_history_snapshot();
  std::vector<SnapshotStats> stats;
  std::vector<SchemaChange> all_changes;
  std::vector<std::size_t> changes_per_commit;
  std::map<std::string, EntityClass> last_seen;
  std::map<std::string, std::vector<SchemaChange>> changes_by_dialect;
  std::vector<std::string> diagnostics;

  try {
    for (std::size_t i = 0; i < n_commits; ++i) {
      ParsedSnapshot parsed;
      {
        std::unique_lock lock(mu);
        cv_ready.wait(lock, [&] { return failure || ready.count(i) > 0; });
        if (failure) std::rethrow_exception(failure);
        parsed = std::move(ready.at(i));
        ready.erase(i);
        next_to_consume = i + 1;
        cv_space.notify_all();
      }

      SchemaSnapshot snapshot = pipeline.ingest(parsed);
      std::vector<SchemaChange> changes = diff_snapshots(previous, snapshot);

      for (const auto& diag : snapshot.diagnostics)
        diagnostics.push_back("[" + std::to_string(i) + "] " +
                              short_hash(snapshot.commit.hash) + " " + diag);
      stats.push_back(snapshot_stats(snapshot));
      update_last_seen(last_seen, snapshot);
      changes_per_commit.push_back(changes.size());

      const std::string dialect_label =
          config.dialect == MapperDialect::Auto
              ? pipeline.last_vocabulary().label()
              : to_string(config.dialect);
      auto& bucket = changes_by_dialect[dialect_label];
      for (auto& change : changes) {
        bucket.push_back(change);
        all_changes.push_back(std::move(change));
      }

      if (progress)
        *progress << "[" << (i + 1) << "/" << n_commits << "] "
                  << short_hash(snapshot.commit.hash)
                  << " entities=" << stats.back().n_entities
                  << " changes=" << changes_per_commit.back() << "\n";
      previous = std::move(snapshot);
    }
  } catch (...) {
    {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      cv_space.notify_all();
      cv_ready.notify_all();
    }
    for (auto& t : pool) t.join();
    throw;
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  // metrics
  ReportData data;
  data.project_label = config.project_label.empty()
                           ? derive_label(config.source.local_path)
                           : config.project_label;
  data.dialect_label = to_string(config.dialect);
  data.stats = std::move(stats);
  data.trend = trend_series(data.stats);
  data.distribution = change_distribution(all_changes);
  for (const auto& [label, bucket] : changes_by_dialect)
    if (!bucket.empty())
      data.distribution_by_dialect[label] = change_distribution(bucket);
  data.drilldown = attribute_change_drilldown(all_changes);
  data.churn = churn_rate(changes_per_commit);
  for (const auto& [qname, entity] : previous.entities)
    data.dot_matrix.push_back({qname, entity.verdict});
  data.treemap = entity_churn(all_changes, last_seen);
  if (data.stats.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& s : data.stats) {
      xs.push_back(static_cast<double>(s.n_entities));
      ys.push_back(static_cast<double>(s.schema_loc));
    }
    try {
      data.correlation = pearson(xs, ys);
    } catch (const DegenerateSeries&) {
      data.correlation = std::nullopt;
    }
  }
  data.diagnostics = std::move(diagnostics);
  data.changes = std::move(all_changes);

  AnalysisResult result;
  result.churn = data.churn;
  result.total_commits = data.churn.total_commits;
  result.total_changes = data.distribution.total;
  if (!data.stats.empty()) {
    result.n_entities_min = std::numeric_limits<long>::max();
    for (const auto& s : data.stats) {
      result.n_entities_min = std::min(result.n_entities_min, s.n_entities);
      result.n_entities_max = std::max(result.n_entities_max, s.n_entities);
    }
  }
  result.bundle = emit_report_bundle(data, config.output_dir,
                                     config.deterministic_manifest);
  return result;
}

}  // namespace schemev
