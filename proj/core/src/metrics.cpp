#include "schemev/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "schemev/errors.hpp"

namespace schemev {

SnapshotStats snapshot_stats(const SchemaSnapshot& snapshot) {
  SnapshotStats stats;
  stats.commit = snapshot.commit;
  stats.index = snapshot.index;
  stats.n_entities = static_cast<long>(snapshot.entities.size());
  for (const auto& [qname, entity] : snapshot.entities)
    stats.schema_loc += entity.schema_loc;
  return stats;
}

std::vector<TrendPoint> trend_series(const std::vector<SnapshotStats>& stats) {
  std::vector<TrendPoint> points;
  if (stats.empty()) return points;
  long max_entities = 0, max_loc = 0;
  for (const auto& s : stats) {
    max_entities = std::max(max_entities, s.n_entities);
    max_loc = std::max(max_loc, s.schema_loc);
  }
  const double n = static_cast<double>(stats.size());
  points.reserve(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    TrendPoint p;
    p.commit_index = stats[i].index;
    p.pct_progress = 100.0 * (static_cast<double>(i) + 1.0) / n;
    p.n_entities = stats[i].n_entities;
    p.schema_loc = stats[i].schema_loc;
    p.n_entities_norm_pct =
        max_entities > 0
            ? 100.0 * static_cast<double>(p.n_entities) / static_cast<double>(max_entities)
            : 0.0;
    p.schema_loc_norm_pct =
        max_loc > 0
            ? 100.0 * static_cast<double>(p.schema_loc) / static_cast<double>(max_loc)
            : 0.0;
    points.push_back(p);
  }
  return points;
}

std::vector<TrendPoint> trend_series(const std::vector<SchemaSnapshot>& snapshots) {
  std::vector<SnapshotStats> stats;
  stats.reserve(snapshots.size());
  for (const auto& s : snapshots) stats.push_back(snapshot_stats(s));
  return trend_series(stats);
}

ChangeDistribution change_distribution(const std::vector<SchemaChange>& changes) {
  ChangeDistribution dist;
  for (const auto& change : changes) {
    ++dist.counts[static_cast<std::size_t>(change.kind)];
    if (is_changed_kind(change.kind)) ++dist.attribute_change_merged;
  }
  dist.total = static_cast<long>(changes.size());
  if (dist.total > 0) {
    auto pct = [&](long count) {
      return 100.0 * static_cast<double>(count) / static_cast<double>(dist.total);
    };
    dist.entity_add_pct = pct(dist.counts[0]);
    dist.entity_remove_pct = pct(dist.counts[1]);
    dist.attribute_add_pct = pct(dist.counts[2]);
    dist.attribute_remove_pct = pct(dist.counts[3]);
    dist.attribute_change_pct = pct(dist.attribute_change_merged);
  }
  return dist;
}

ChurnStats churn_rate(const std::vector<std::size_t>& changes_per_commit) {
  ChurnStats stats;
  stats.total_commits = static_cast<long>(changes_per_commit.size());
  for (std::size_t count : changes_per_commit)
    if (count > 0) ++stats.schema_relevant_commits;
  if (stats.total_commits > 0)
    stats.churn_rate_pct = 100.0 *
                           static_cast<double>(stats.schema_relevant_commits) /
                           static_cast<double>(stats.total_commits);
  return stats;
}

Drilldown attribute_change_drilldown(const std::vector<SchemaChange>& changes) {
  Drilldown drill;
  for (const auto& change : changes) {
    switch (change.kind) {
      case ChangeKind::AttributeTypeChanged: ++drill.type_changes; break;
      case ChangeKind::AttributeInitializationChanged:
        ++drill.initialization_changes;
        break;
      case ChangeKind::AttributeAnnotationChanged:
        ++drill.annotation_changes;
        break;
      default: break;
    }
  }
  return drill;
}

void update_last_seen(std::map<std::string, EntityClass>& last_seen,
                      const SchemaSnapshot& snapshot) {
  for (const auto& [qname, entity] : snapshot.entities)
    last_seen[qname] = entity;
}

std::vector<EntityChurn> entity_churn(
    const std::vector<SchemaChange>& changes,
    const std::map<std::string, EntityClass>& last_seen) {
  std::map<std::string, long> counts;
  for (const auto& change : changes) ++counts[change.entity];

  std::vector<EntityChurn> churn;
  churn.reserve(counts.size());
  for (const auto& [qname, count] : counts) {
    EntityChurn entry;
    entry.qualified_name = qname;
    entry.change_count = count;
    if (auto it = last_seen.find(qname); it != last_seen.end()) {
      entry.schema_loc = it->second.schema_loc;
      entry.verdict = it->second.verdict;
    }
    churn.push_back(std::move(entry));
  }
  return churn;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw DegenerateSeries("series lengths differ");
  if (xs.size() < 2) throw DegenerateSeries("series shorter than 2");
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateSeries("zero variance in series");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace schemev
