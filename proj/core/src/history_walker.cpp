#include "schemev/history_walker.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "schemev/errors.hpp"
#include "schemev/subprocess.hpp"
#include "schemev/text.hpp"

namespace fs = std::filesystem;

namespace schemev {

namespace {

// keep user/system git config from leaking into log output or hashes
const std::map<std::string, std::string> kGitEnv = {
    {"GIT_CONFIG_GLOBAL", "/dev/null"},
    {"GIT_CONFIG_SYSTEM", "/dev/null"},
    {"GIT_PAGER", "cat"},
};

bool is_java_path(std::string_view path) { return path.ends_with(".java"); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// "<NNN>_<label>" -> NNN, or nullopt when the name does not match
std::optional<long> numeric_prefix(const std::string& name) {
  auto underscore = name.find('_');
  if (underscore == std::string::npos || underscore == 0) return std::nullopt;
  for (std::size_t i = 0; i < underscore; ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
  return std::stol(name.substr(0, underscore));
}

std::string epoch_iso(long seconds) {
  char buf[40];
  std::time_t t = static_cast<std::time_t>(seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S+00:00", &tm);
  return buf;
}

std::shared_ptr<const std::string> decode_shared(std::string_view bytes) {
  return std::make_shared<const std::string>(decode_utf8_lossy(bytes));
}

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RepoAccessError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

std::string HistoryWalker::git_executable() {
  if (const char* override_path = std::getenv("SCHEMEV_GIT"))
    if (*override_path) return override_path;
  return "git";
}

HistoryWalker::HistoryWalker(HistorySource source) : source_(std::move(source)) {
  if (!fs::exists(source_.local_path))
    throw RepoAccessError("history source does not exist: " +
                          source_.local_path.string());
  if (source_.kind == HistoryKind::VcsRepo) {
    auto probe = run_process({git_executable(), "-C", source_.local_path.string(),
                              "rev-parse", "--git-dir"},
                             std::nullopt, kGitEnv);
    if (probe.exit_code != 0)
      throw RepoAccessError("not a git repository: " +
                            source_.local_path.string() + " (" + probe.err + ")");
    return;
  }
  // snapshotDir: collect and order <NNN>_<label> directories
  std::map<long, fs::path> ordered;
  for (const auto& entry : fs::directory_iterator(source_.local_path)) {
    if (!entry.is_directory()) continue;
    auto prefix = numeric_prefix(entry.path().filename().string());
    if (!prefix) continue;
    auto [it, inserted] = ordered.emplace(*prefix, entry.path());
    if (!inserted)
      throw RepoAccessError("duplicate snapshot number " +
                            std::to_string(*prefix) + " under " +
                            source_.local_path.string());
  }
  for (auto& [num, path] : ordered) snapshot_dirs_.push_back(path);
}

std::vector<std::string> HistoryWalker::git_base_args() const {
  return {git_executable(), "-C", source_.local_path.string()};
}

CommitRef HistoryWalker::snapshot_commit_ref(std::size_t position) const {
  const fs::path& dir = snapshot_dirs_.at(position);
  std::string name = dir.filename().string();
  std::string digits = name.substr(0, name.find('_'));

  CommitRef ref;
  ref.hash = "fix-" + digits;
  long number = std::stol(digits);
  ref.author_date = epoch_iso(number);
  ref.committer_date = ref.author_date;
  if (position > 0) {
    std::string prev_name = snapshot_dirs_[position - 1].filename().string();
    ref.parents.push_back("fix-" + prev_name.substr(0, prev_name.find('_')));
  }

  fs::path meta = dir / "meta.json";
  if (fs::exists(meta)) {
    try {
      auto doc = nlohmann::json::parse(read_file_bytes(meta));
      if (doc.contains("hash")) ref.hash = doc["hash"].get<std::string>();
      if (doc.contains("author_date"))
        ref.author_date = doc["author_date"].get<std::string>();
      if (doc.contains("committer_date"))
        ref.committer_date = doc["committer_date"].get<std::string>();
      if (doc.contains("parents"))
        ref.parents = doc["parents"].get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw RepoAccessError(meta.string() + ": " + e.what());
    }
  }
  return ref;
}

std::vector<CommitRef> HistoryWalker::linearize_history() const {
  if (source_.kind == HistoryKind::SnapshotDir) {
    std::vector<CommitRef> refs;
    refs.reserve(snapshot_dirs_.size());
    for (std::size_t i = 0; i < snapshot_dirs_.size(); ++i)
      refs.push_back(snapshot_commit_ref(i));
    return refs;
  }

  std::vector<std::string> args = git_base_args();
  args.push_back("log");
  if (source_.before_date) args.push_back("--before=" + *source_.before_date);
  args.push_back("--cherry-pick");
  args.push_back("--date-order");
  args.push_back("--pretty=format:%H;%aI;%cI;%P");
  auto run = run_process(args, std::nullopt, kGitEnv);
  if (run.exit_code != 0) {
    if (run.err.find("does not have any commits") != std::string::npos ||
        run.err.find("bad default revision") != std::string::npos)
      return {};  // valid but empty repository
    throw ToolInvocationError("git log failed (" +
                              std::to_string(run.exit_code) + "): " + run.err);
  }

  std::vector<CommitRef> refs;
  std::istringstream lines(run.out);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto parts = split(line, ';');
    if (parts.size() < 4)
      throw ToolInvocationError("unexpected git log line: " + line);
    CommitRef ref;
    ref.hash = parts[0];
    ref.author_date = parts[1];
    ref.committer_date = parts[2];
    for (const auto& parent : split(parts[3], ' '))
      if (!parent.empty()) ref.parents.push_back(parent);
    refs.push_back(std::move(ref));
  }
  std::reverse(refs.begin(), refs.end());  // oldest first
  return refs;
}

std::vector<TreeEntry> HistoryWalker::list_java_files(
    const CommitRef& commit) const {
  std::vector<std::string> args = git_base_args();
  args.insert(args.end(), {"ls-tree", "-r", "-z", commit.hash});
  auto run = run_process(args, std::nullopt, kGitEnv);
  if (run.exit_code != 0)
    throw RepoAccessError("git ls-tree " + commit.hash + " failed: " + run.err);

  std::vector<TreeEntry> entries;
  std::size_t start = 0;
  while (start < run.out.size()) {
    auto nul = run.out.find('\0', start);
    if (nul == std::string::npos) nul = run.out.size();
    std::string_view record(run.out.data() + start, nul - start);
    start = nul + 1;
    // "<mode> <type> <oid>\t<path>"
    auto tab = record.find('\t');
    if (tab == std::string_view::npos) continue;
    std::string_view meta = record.substr(0, tab);
    std::string_view path = record.substr(tab + 1);
    if (!is_java_path(path)) continue;
    auto sp1 = meta.find(' ');
    auto sp2 = meta.find(' ', sp1 + 1);
    if (sp1 == std::string_view::npos || sp2 == std::string_view::npos) continue;
    if (meta.substr(sp1 + 1, sp2 - sp1 - 1) != "blob") continue;
    entries.push_back({std::string(path), std::string(meta.substr(sp2 + 1))});
  }
  return entries;
}

std::map<std::string, std::shared_ptr<const std::string>>
HistoryWalker::read_blobs(const std::vector<std::string>& oids) const {
  std::map<std::string, std::shared_ptr<const std::string>> blobs;
  if (oids.empty()) return blobs;
  std::string request;
  for (const auto& oid : oids) {
    request += oid;
    request += '\n';
  }
  std::vector<std::string> args = git_base_args();
  args.insert(args.end(), {"cat-file", "--batch"});
  auto run = run_process(args, request, kGitEnv);
  if (run.exit_code != 0)
    throw RepoAccessError("git cat-file --batch failed: " + run.err);

  std::size_t pos = 0;
  const std::string& out = run.out;
  while (pos < out.size()) {
    auto eol = out.find('\n', pos);
    if (eol == std::string::npos) break;
    std::string header = out.substr(pos, eol - pos);
    pos = eol + 1;
    auto fields = split(header, ' ');
    if (fields.size() >= 2 && fields[1] == "missing")
      throw RepoAccessError("missing blob " + fields[0]);
    if (fields.size() < 3)
      throw RepoAccessError("unexpected cat-file header: " + header);
    std::size_t size = std::stoul(fields[2]);
    if (pos + size > out.size())
      throw RepoAccessError("truncated cat-file output");
    blobs[fields[0]] = decode_shared(std::string_view(out).substr(pos, size));
    pos += size + 1;  // trailing newline after the blob
  }
  return blobs;
}

Snapshot HistoryWalker::materialize_snapshot(const CommitRef& commit,
                                             int index) const {
  Snapshot snapshot;
  snapshot.commit = commit;
  snapshot.index = index;

  if (source_.kind == HistoryKind::VcsRepo) {
    auto entries = list_java_files(commit);
    std::vector<std::string> oids;
    oids.reserve(entries.size());
    for (const auto& e : entries) oids.push_back(e.oid);
    std::sort(oids.begin(), oids.end());
    oids.erase(std::unique(oids.begin(), oids.end()), oids.end());
    auto blobs = read_blobs(oids);
    for (const auto& e : entries) {
      auto it = blobs.find(e.oid);
      if (it == blobs.end()) throw RepoAccessError("missing blob " + e.oid);
      snapshot.files[e.path] = it->second;
    }
    return snapshot;
  }

  // snapshotDir: locate by index
  if (index < 0 || static_cast<std::size_t>(index) >= snapshot_dirs_.size())
    throw RepoAccessError("snapshot index out of range: " + std::to_string(index));
  const fs::path& dir = snapshot_dirs_[static_cast<std::size_t>(index)];
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string rel = fs::relative(entry.path(), dir).generic_string();
    if (!is_java_path(rel)) continue;
    snapshot.files[rel] = decode_shared(read_file_bytes(entry.path()));
  }
  return snapshot;
}

}  // namespace schemev
