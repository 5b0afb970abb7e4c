// Aggregations over snapshot and change streams: trend series, change
// distribution, churn, per-entity churn, drill-down and correlation.
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schemev/schema_differ.hpp"

namespace schemev {

// Compact per-commit record; all metrics run off these.
struct SnapshotStats {
  CommitRef commit;
  int index = 0;
  long n_entities = 0;
  long schema_loc = 0;
};

SnapshotStats snapshot_stats(const SchemaSnapshot& snapshot);

struct TrendPoint {
  int commit_index = 0;
  double pct_progress = 0.0;        // 100*(index+1)/N
  long n_entities = 0;
  long schema_loc = 0;
  double n_entities_norm_pct = 0.0;  // percent of the series maximum
  double schema_loc_norm_pct = 0.0;

  bool operator==(const TrendPoint&) const = default;
};

std::vector<TrendPoint> trend_series(const std::vector<SnapshotStats>& stats);
std::vector<TrendPoint> trend_series(const std::vector<SchemaSnapshot>& snapshots);

struct ChangeDistribution {
  std::array<long, kChangeKindCount> counts{};  // indexed by ChangeKind
  long attribute_change_merged = 0;             // the three changed kinds
  long total = 0;
  // relative shares (percent) over the five top-level categories; 0 when
  // total == 0
  double entity_add_pct = 0.0;
  double entity_remove_pct = 0.0;
  double attribute_add_pct = 0.0;
  double attribute_remove_pct = 0.0;
  double attribute_change_pct = 0.0;
};

ChangeDistribution change_distribution(const std::vector<SchemaChange>& changes);

struct ChurnStats {
  long total_commits = 0;
  long schema_relevant_commits = 0;
  double churn_rate_pct = 0.0;  // 0 when total_commits == 0
};

// One entry per commit; a commit is schema-relevant iff its diff is
// non-empty.
ChurnStats churn_rate(const std::vector<std::size_t>& changes_per_commit);

struct Drilldown {
  long type_changes = 0;
  long initialization_changes = 0;
  long annotation_changes = 0;
};

Drilldown attribute_change_drilldown(const std::vector<SchemaChange>& changes);

struct EntityChurn {
  std::string qualified_name;
  long change_count = 0;
  long schema_loc = 0;      // at last appearance
  DenormVerdict verdict;    // at last appearance
};

// One record per entity ever named by a change, with size/verdict taken from
// the last snapshot in which the entity appeared.
std::vector<EntityChurn> entity_churn(
    const std::vector<SchemaChange>& changes,
    const std::map<std::string, EntityClass>& last_seen);

// Streaming helper for building the last-seen map commit by commit.
void update_last_seen(std::map<std::string, EntityClass>& last_seen,
                      const SchemaSnapshot& snapshot);

// Pearson product-moment correlation; throws DegenerateSeries for length
// < 2, unequal lengths, or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace schemev
