#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "schemev/errors.hpp"
#include "schemev/metrics.hpp"

using namespace schemev;

namespace {

std::vector<SnapshotStats> stats_from_counts(std::vector<long> entities,
                                             std::vector<long> locs = {}) {
  std::vector<SnapshotStats> stats;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    SnapshotStats s;
    s.index = static_cast<int>(i);
    s.commit.hash = "h" + std::to_string(i);
    s.n_entities = entities[i];
    s.schema_loc = locs.empty() ? entities[i] * 10 : locs[i];
    stats.push_back(s);
  }
  return stats;
}

SchemaChange change_of(ChangeKind kind, const std::string& entity = "m.E") {
  SchemaChange c;
  c.kind = kind;
  c.entity = entity;
  if (is_attribute_kind(kind)) c.attribute = "a";
  return c;
}

}  // namespace

TEST_CASE("trend normalization peaks at 100 where the raw series peaks") {
  auto points = trend_series(stats_from_counts({0, 41, 82, 82, 70}));
  REQUIRE(points.size() == 5);
  CHECK(points[0].n_entities_norm_pct == doctest::Approx(0.0));
  CHECK(points[1].n_entities_norm_pct == doctest::Approx(50.0));
  CHECK(points[2].n_entities_norm_pct == doctest::Approx(100.0));
  CHECK(points[3].n_entities_norm_pct == doctest::Approx(100.0));
  CHECK(points[4].n_entities_norm_pct == doctest::Approx(85.3658536585));
  CHECK(points[0].pct_progress == doctest::Approx(20.0));
  CHECK(points[4].pct_progress == doctest::Approx(100.0));
}

TEST_CASE("single empty snapshot normalizes to zero") {
  auto points = trend_series(stats_from_counts({0}, {0}));
  REQUIRE(points.size() == 1);
  CHECK(points[0].pct_progress == doctest::Approx(100.0));
  CHECK(points[0].n_entities_norm_pct == 0.0);
  CHECK(points[0].schema_loc_norm_pct == 0.0);
}

TEST_CASE("trend series against a hand-computed table") {
  // entities: 1,3,4,2  loc: 10,30,50,40
  auto points = trend_series(stats_from_counts({1, 3, 4, 2}, {10, 30, 50, 40}));
  REQUIRE(points.size() == 4);
  CHECK(points[0].pct_progress == doctest::Approx(25.0));
  CHECK(points[1].pct_progress == doctest::Approx(50.0));
  CHECK(points[2].pct_progress == doctest::Approx(75.0));
  CHECK(points[3].pct_progress == doctest::Approx(100.0));
  CHECK(points[0].n_entities_norm_pct == doctest::Approx(25.0));
  CHECK(points[1].n_entities_norm_pct == doctest::Approx(75.0));
  CHECK(points[2].n_entities_norm_pct == doctest::Approx(100.0));
  CHECK(points[3].n_entities_norm_pct == doctest::Approx(50.0));
  CHECK(points[0].schema_loc_norm_pct == doctest::Approx(20.0));
  CHECK(points[3].schema_loc_norm_pct == doctest::Approx(80.0));
}

TEST_CASE("empty history yields an empty trend") {
  CHECK(trend_series(std::vector<SnapshotStats>{}).empty());
}

TEST_CASE("one entity addition gives a 100/0/0/0/0 distribution") {
  auto dist = change_distribution({change_of(ChangeKind::EntityAdded)});
  CHECK(dist.total == 1);
  CHECK(dist.entity_add_pct == doctest::Approx(100.0));
  CHECK(dist.entity_remove_pct == 0.0);
  CHECK(dist.attribute_add_pct == 0.0);
  CHECK(dist.attribute_remove_pct == 0.0);
  CHECK(dist.attribute_change_pct == 0.0);
}

TEST_CASE("distribution merges the changed kinds and shares sum to 100") {
  std::vector<SchemaChange> changes = {
      change_of(ChangeKind::EntityAdded),
      change_of(ChangeKind::EntityRemoved),
      change_of(ChangeKind::AttributeAdded),
      change_of(ChangeKind::AttributeRemoved),
      change_of(ChangeKind::AttributeTypeChanged),
      change_of(ChangeKind::AttributeInitializationChanged),
      change_of(ChangeKind::AttributeAnnotationChanged),
  };
  auto dist = change_distribution(changes);
  CHECK(dist.total == 7);
  CHECK(dist.attribute_change_merged == 3);
  double sum = dist.entity_add_pct + dist.entity_remove_pct +
               dist.attribute_add_pct + dist.attribute_remove_pct +
               dist.attribute_change_pct;
  CHECK(sum == doctest::Approx(100.0).epsilon(0.001));
}

TEST_CASE("empty input yields zero counts and zero shares") {
  auto dist = change_distribution({});
  CHECK(dist.total == 0);
  CHECK(dist.entity_add_pct == 0.0);
  CHECK(dist.attribute_change_pct == 0.0);
}

TEST_CASE("churn rate arithmetic") {
  // 10 commits, 3 schema-relevant
  std::vector<std::size_t> counts = {0, 2, 0, 0, 1, 0, 0, 0, 4, 0};
  auto churn = churn_rate(counts);
  CHECK(churn.total_commits == 10);
  CHECK(churn.schema_relevant_commits == 3);
  CHECK(churn.churn_rate_pct == doctest::Approx(30.0));
}

TEST_CASE("zero commits give zero churn") {
  auto churn = churn_rate({});
  CHECK(churn.total_commits == 0);
  CHECK(churn.schema_relevant_commits == 0);
  CHECK(churn.churn_rate_pct == 0.0);
}

TEST_CASE("drill-down tallies the three changed kinds") {
  CHECK(attribute_change_drilldown({}).type_changes == 0);
  std::vector<SchemaChange> changes = {
      change_of(ChangeKind::AttributeTypeChanged),
      change_of(ChangeKind::AttributeTypeChanged),
      change_of(ChangeKind::AttributeInitializationChanged),
      change_of(ChangeKind::AttributeAnnotationChanged),
      change_of(ChangeKind::EntityAdded),
  };
  auto drill = attribute_change_drilldown(changes);
  CHECK(drill.type_changes == 2);
  CHECK(drill.initialization_changes == 1);
  CHECK(drill.annotation_changes == 1);
}

TEST_CASE("an entity created once and kept counts one change") {
  std::map<std::string, EntityClass> last_seen;
  EntityClass e;
  e.qualified_name = "m.E";
  e.schema_loc = 12;
  e.verdict.denormalized = true;
  e.verdict.reasons = {DenormReason::ContainerType};
  last_seen["m.E"] = e;
  auto churn = entity_churn({change_of(ChangeKind::EntityAdded)}, last_seen);
  REQUIRE(churn.size() == 1);
  CHECK(churn[0].qualified_name == "m.E");
  CHECK(churn[0].change_count == 1);
  CHECK(churn[0].schema_loc == 12);
  CHECK(churn[0].verdict.denormalized);
}

TEST_CASE("entity churn change counts sum to the change total") {
  auto history = testsupport::make_random_history(3, 12, 8);
  SchemaSnapshot prev = empty_pre_history_snapshot();
  std::vector<SchemaChange> all;
  std::map<std::string, EntityClass> last_seen;
  for (const auto& snapshot : history) {
    for (auto& c : diff_snapshots(prev, snapshot)) all.push_back(c);
    update_last_seen(last_seen, snapshot);
    prev = snapshot;
  }
  auto churn = entity_churn(all, last_seen);
  long total = 0;
  for (const auto& entry : churn) total += entry.change_count;
  CHECK(total == static_cast<long>(all.size()));
  for (const auto& entry : churn) CHECK(entry.change_count >= 1);
}

TEST_CASE("pearson endpoints") {
  std::vector<double> up = {1, 2, 3};
  std::vector<double> down = {3, 2, 1};
  CHECK(pearson(up, up) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pearson(up, down) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("pearson rejects degenerate input") {
  std::vector<double> constant = {5, 5, 5};
  std::vector<double> up = {1, 2, 3};
  std::vector<double> one = {1};
  CHECK_THROWS_AS((void)pearson(constant, up), DegenerateSeries);
  CHECK_THROWS_AS((void)pearson(up, constant), DegenerateSeries);
  CHECK_THROWS_AS((void)pearson(one, one), DegenerateSeries);
  std::vector<double> mismatched = {1, 2};
  CHECK_THROWS_AS((void)pearson(up, mismatched), DegenerateSeries);
}

TEST_CASE("pearson matches a direct-formula recomputation") {
  std::vector<double> xs = {2, 4, 4, 7, 9, 11, 12, 15};
  std::vector<double> ys = {20, 33, 30, 45, 61, 66, 70, 90};
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    syy += ys[i] * ys[i];
    sxy += xs[i] * ys[i];
  }
  double expected = (sxy - sx * sy / n) /
                    std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
  CHECK(pearson(xs, ys) == doctest::Approx(expected).epsilon(1e-9));
}
