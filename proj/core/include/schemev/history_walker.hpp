// Linearizes a commit history into ordered source snapshots. Sources are
// either a local git repository (driven through the git CLI) or a plain
// snapshot-directory fixture (<root>/<NNN>_<label>/**.java).
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace schemev {

struct CommitRef {
  std::string hash;
  std::string author_date;     // ISO-8601
  std::string committer_date;  // ISO-8601
  std::vector<std::string> parents;

  bool operator==(const CommitRef&) const = default;
};

enum class HistoryKind { VcsRepo, SnapshotDir };

struct HistorySource {
  HistoryKind kind = HistoryKind::VcsRepo;
  std::filesystem::path local_path;
  std::optional<std::string> before_date;  // ISO-8601 cutoff, vcs only
};

// All .java files reachable at one linearized commit, decoded as UTF-8 with
// replacement. Contents are shared so snapshots stay cheap to copy.
struct Snapshot {
  CommitRef commit;
  int index = 0;
  std::map<std::string, std::shared_ptr<const std::string>> files;
};

struct TreeEntry {
  std::string path;
  std::string oid;  // git blob id
};

class HistoryWalker {
 public:
  // Validates the source; throws RepoAccessError when missing or invalid.
  explicit HistoryWalker(HistorySource source);

  // Oldest-first commit list. For git this reproduces
  //   git log [--before=<cutoff>] --cherry-pick --date-order
  //           --pretty=format:%H;%aI;%cI;%P
  // reversed; for snapshot directories, ascending numeric prefix.
  std::vector<CommitRef> linearize_history() const;

  Snapshot materialize_snapshot(const CommitRef& commit, int index) const;

  // git-backed fast path for incremental pipelines; both are safe to call
  // concurrently (each call spawns its own process).
  std::vector<TreeEntry> list_java_files(const CommitRef& commit) const;
  std::map<std::string, std::shared_ptr<const std::string>> read_blobs(
      const std::vector<std::string>& oids) const;

  bool is_vcs() const { return source_.kind == HistoryKind::VcsRepo; }
  const HistorySource& source() const { return source_; }

  // "git", or the override from $SCHEMEV_GIT.
  static std::string git_executable();

 private:
  std::vector<std::string> git_base_args() const;
  CommitRef snapshot_commit_ref(std::size_t position) const;

  HistorySource source_;
  std::vector<std::filesystem::path> snapshot_dirs_;  // sorted by NNN
};

}  // namespace schemev
