#include "schemev/report_emitter.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "schemev/errors.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace schemev {

namespace {

std::string csv_quote(const std::string& field) {
  bool needs_quoting = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quoting) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row.push_back(',');
    row += csv_quote(fields[i]);
  }
  row.push_back('\n');
  return row;
}

// up to four decimals, trailing zeros trimmed
std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

std::string now_utc_iso() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S+00:00", &tm);
  return buf;
}

ordered_json distribution_json(const ChangeDistribution& dist) {
  ordered_json counts;
  for (int i = 0; i < kChangeKindCount; ++i)
    counts[to_string(static_cast<ChangeKind>(i))] =
        dist.counts[static_cast<std::size_t>(i)];
  ordered_json j;
  j["counts"] = counts;
  j["attribute_change_merged"] = dist.attribute_change_merged;
  j["total"] = dist.total;
  j["shares_pct"] = {
      {"entity_add", round1(dist.entity_add_pct)},
      {"entity_remove", round1(dist.entity_remove_pct)},
      {"attribute_add", round1(dist.attribute_add_pct)},
      {"attribute_remove", round1(dist.attribute_remove_pct)},
      {"attribute_change", round1(dist.attribute_change_pct)},
  };
  return j;
}

ordered_json verdict_json(const DenormVerdict& verdict) {
  ordered_json reasons = ordered_json::array();
  for (const auto& reason : verdict.reasons) reasons.push_back(to_string(reason));
  ordered_json j;
  j["classification"] = verdict.denormalized ? "denormalized" : "normalized";
  j["reasons"] = reasons;
  return j;
}

class BundleWriter {
 public:
  explicit BundleWriter(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("cannot write " + path.string());
    written_.push_back(name);
    ManifestEntry entry;
    entry.name = name;
    entry.sha256 = sha256_hex(content);
    entry.bytes = content.size();
    manifest_.push_back(std::move(entry));
  }

  void remove_partial() {
    std::error_code ec;
    for (const auto& name : written_) fs::remove(dir_ / name, ec);
  }

  std::vector<ManifestEntry> manifest() {
    std::sort(manifest_.begin(), manifest_.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                return a.name < b.name;
              });
    return manifest_;
  }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
  std::vector<ManifestEntry> manifest_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

ReportBundle emit_report_bundle(const ReportData& data,
                                const fs::path& output_dir,
                                bool deterministic_manifest) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string());

  std::map<int, const SnapshotStats*> stats_by_index;
  for (const auto& s : data.stats) stats_by_index[s.index] = &s;

  BundleWriter writer(output_dir);
  try {
    // trend.csv
    {
      std::string csv = csv_row({"commit_index", "hash", "pct_progress",
                                 "n_entities", "schema_loc",
                                 "n_entities_norm_pct", "schema_loc_norm_pct"});
      for (const auto& p : data.trend) {
        auto it = stats_by_index.find(p.commit_index);
        const std::string& hash =
            it != stats_by_index.end() ? it->second->commit.hash : std::string();
        csv += csv_row({std::to_string(p.commit_index), hash,
                        format_number(p.pct_progress),
                        std::to_string(p.n_entities),
                        std::to_string(p.schema_loc),
                        format_number(p.n_entities_norm_pct),
                        format_number(p.schema_loc_norm_pct)});
      }
      writer.write("trend.csv", csv);
    }

    // changes.csv
    {
      std::string csv =
          csv_row({"commit_index", "hash", "committer_date", "kind", "entity",
                   "attribute", "detail_before", "detail_after"});
      for (const auto& c : data.changes) {
        auto it = stats_by_index.find(c.commit_index);
        const std::string& date = it != stats_by_index.end()
                                      ? it->second->commit.committer_date
                                      : std::string();
        csv += csv_row({std::to_string(c.commit_index), c.commit_hash, date,
                        to_string(c.kind), c.entity, c.attribute.value_or(""),
                        c.detail_before.value_or(""),
                        c.detail_after.value_or("")});
      }
      writer.write("changes.csv", csv);
    }

    // dotmatrix.json
    {
      ordered_json entities = ordered_json::array();
      for (const auto& entry : data.dot_matrix) {
        ordered_json e;
        e["qualified_name"] = entry.qualified_name;
        ordered_json v = verdict_json(entry.verdict);
        e["classification"] = v["classification"];
        e["reasons"] = v["reasons"];
        entities.push_back(std::move(e));
      }
      ordered_json j;
      j["entities"] = entities;
      writer.write("dotmatrix.json", j.dump(2) + "\n");
    }

    // treemap.json
    {
      ordered_json entities = ordered_json::array();
      for (const auto& entry : data.treemap) {
        ordered_json e;
        e["qualified_name"] = entry.qualified_name;
        e["schema_loc"] = entry.schema_loc;
        e["change_count"] = entry.change_count;
        entities.push_back(std::move(e));
      }
      ordered_json j;
      j["entities"] = entities;
      writer.write("treemap.json", j.dump(2) + "\n");
    }

    // distribution.json
    {
      ordered_json j;
      j["overall"] = distribution_json(data.distribution);
      ordered_json by_dialect = ordered_json::object();
      for (const auto& [label, dist] : data.distribution_by_dialect)
        by_dialect[label] = distribution_json(dist);
      j["by_dialect"] = by_dialect;
      writer.write("distribution.json", j.dump(2) + "\n");
    }

    // drilldown.json
    {
      ordered_json j;
      j["type"] = data.drilldown.type_changes;
      j["initialization"] = data.drilldown.initialization_changes;
      j["annotations"] = data.drilldown.annotation_changes;
      writer.write("drilldown.json", j.dump(2) + "\n");
    }

    // summary.json
    {
      long n_min = 0, n_max = 0, loc_min = 0, loc_max = 0;
      if (!data.stats.empty()) {
        n_min = loc_min = std::numeric_limits<long>::max();
        for (const auto& s : data.stats) {
          n_min = std::min(n_min, s.n_entities);
          n_max = std::max(n_max, s.n_entities);
          loc_min = std::min(loc_min, s.schema_loc);
          loc_max = std::max(loc_max, s.schema_loc);
        }
      }
      ordered_json j;
      j["format_version"] = "1";
      j["project"] = data.project_label;
      j["dialect"] = data.dialect_label;
      j["total_commits"] = data.churn.total_commits;
      if (data.stats.empty()) {
        j["first_commit_date"] = nullptr;
        j["last_commit_date"] = nullptr;
      } else {
        j["first_commit_date"] = data.stats.front().commit.committer_date;
        j["last_commit_date"] = data.stats.back().commit.committer_date;
      }
      j["n_entities_min"] = n_min;
      j["n_entities_max"] = n_max;
      j["schema_loc_min"] = loc_min;
      j["schema_loc_max"] = loc_max;
      j["schema_relevant_commits"] = data.churn.schema_relevant_commits;
      j["churn_rate_pct"] = data.churn.churn_rate_pct;
      j["total_changes"] = data.distribution.total;
      if (data.correlation) j["correlation_entities_loc"] = *data.correlation;
      else j["correlation_entities_loc"] = nullptr;
      writer.write("summary.json", j.dump(2) + "\n");
    }

    // diagnostics.txt
    {
      std::string text;
      for (const auto& diag : data.diagnostics) {
        text += diag;
        text.push_back('\n');
      }
      writer.write("diagnostics.txt", text);
    }

    // manifest.json (last; lists the eight data files)
    ReportBundle bundle;
    bundle.output_dir = output_dir;
    bundle.manifest = writer.manifest();
    bundle.project_label = data.project_label;
    bundle.dialect = data.dialect_label;
    if (!deterministic_manifest) bundle.generated_at = now_utc_iso();
    {
      ordered_json j;
      j["format_version"] = "1";
      j["project"] = bundle.project_label;
      j["dialect"] = bundle.dialect;
      if (!deterministic_manifest) j["generated_at"] = bundle.generated_at;
      ordered_json files = ordered_json::array();
      for (const auto& entry : bundle.manifest) {
        ordered_json f;
        f["name"] = entry.name;
        f["sha256"] = entry.sha256;
        f["bytes"] = entry.bytes;
        files.push_back(std::move(f));
      }
      j["files"] = files;
      writer.write("manifest.json", j.dump(2) + "\n");
    }
    return bundle;
  } catch (...) {
    writer.remove_partial();
    throw;
  }
}

namespace {

// minimal CSV reader for the emitter's own dialect
std::vector<std::vector<std::string>> parse_csv(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      row_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_started = true;
    } else if (c == '\n') {
      if (row_started || !field.empty()) {
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        row_started = false;
      }
    } else if (c == '\r') {
      // swallowed; rows end on \n
    } else {
      field.push_back(c);
      row_started = true;
    }
  }
  if (row_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<SchemaChange> read_changes_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  auto rows = parse_csv(content);
  std::vector<SchemaChange> changes;
  for (std::size_t r = 1; r < rows.size(); ++r) {  // skip header
    const auto& row = rows[r];
    if (row.size() != 8) throw IoError(path.string() + ": malformed row");
    SchemaChange change;
    change.commit_index = std::stoi(row[0]);
    change.commit_hash = row[1];
    auto kind = change_kind_from_string(row[3]);
    if (!kind) throw IoError(path.string() + ": unknown kind " + row[3]);
    change.kind = *kind;
    change.entity = row[4];
    if (is_attribute_kind(change.kind)) change.attribute = row[5];
    if (is_changed_kind(change.kind)) {
      change.detail_before = row[6];
      change.detail_after = row[7];
    }
    changes.push_back(std::move(change));
  }
  return changes;
}

}  // namespace schemev
