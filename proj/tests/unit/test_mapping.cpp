#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "riemcon/errors.hpp"
#include "riemcon/mapping/grid.hpp"
#include "riemcon/mapping/logodds.hpp"
#include "riemcon/mapping/occupancy.hpp"
#include "riemcon/mapping/semantic_grid.hpp"

using namespace riemcon;
using namespace riemcon::mapping;
using manifold::Pose;

namespace {

Eigen::VectorXd randomVector(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v(k) = u(rng);
  return v;
}

Eigen::VectorXd randomLogPmf(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::VectorXd p(n);
  for (int k = 0; k < n; ++k) p(k) = u(rng);
  return (p / p.sum()).array().log();
}

// Segment/box overlap of positive length, by slab clipping.
bool segmentCrossesBox(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                       const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  double t0 = 0.0, t1 = 1.0;
  const Eigen::Vector3d d = b - a;
  for (int k = 0; k < 3; ++k) {
    if (d(k) == 0.0) {
      if (a(k) < lo(k) || a(k) >= hi(k)) return false;
      continue;
    }
    double ta = (lo(k) - a(k)) / d(k), tb = (hi(k) - a(k)) / d(k);
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t1 - t0 > 1e-9;
}

GridGeometry lineGeometry() {
  GridGeometry g;
  g.dims = Eigen::Vector3i(10, 1, 1);
  g.cell_size = 0.2;
  return g;
}

}  // namespace

TEST(LogOdds, SoftmaxInvertsLogOdds) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd logp = randomLogPmf(rng, 2 + trial % 5);
    const Eigen::VectorXd p = logp.array().exp();
    const Eigen::VectorXd h = logOdds(p);
    EXPECT_EQ(h(0), 0.0);
    EXPECT_LE((softmax(h) - p).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LogOdds, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  for (int c : {1, 2, 5}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd h = randomVector(rng, c + 1, 4.0);
      const Eigen::VectorXd lq = randomLogPmf(rng, c + 1);
      const Eigen::VectorXd g = mapLocalGradient(h, lq);
      Eigen::VectorXd fd(c + 1);
      const double step = 1e-6;
      for (int k = 0; k <= c; ++k) {
        Eigen::VectorXd hp = h, hm = h;
        hp(k) += step;
        hm(k) -= step;
        fd(k) = (mapObjective(hp, lq) - mapObjective(hm, lq)) / (2 * step);
      }
      EXPECT_LE((g - fd).norm(), 1e-4 * std::max(fd.norm(), 1e-6)) << "C=" << c;
    }
  }
}

TEST(LogOdds, GradientIsGaugeInvariantAndStationaryAtData) {
  std::mt19937_64 rng(3);
  const Eigen::VectorXd h = randomVector(rng, 4, 3.0);
  const Eigen::VectorXd lq = randomLogPmf(rng, 4);
  const Eigen::VectorXd shifted = lq.array() + 7.5;
  EXPECT_LE((mapLocalGradient(h, lq) - mapLocalGradient(h, shifted)).norm(), 1e-12);
  EXPECT_LE(mapLocalGradient(lq, lq).norm(), 1e-15);
  EXPECT_LE(mapLocalGradient(h, h.array() - 2.0).norm(), 1e-15);
  // large magnitudes stay finite thanks to the max shift
  const Eigen::VectorXd big = Eigen::Vector4d(0, 800, 900, -700);
  EXPECT_TRUE(mapLocalGradient(big, lq).allFinite());
}

TEST(LogOdds, ObjectiveIsNegativeKl) {
  std::mt19937_64 rng(4);
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(4, std::log(0.25));
  EXPECT_NEAR(mapObjective(Eigen::VectorXd::Zero(4), uniform), 0.0, 1e-15);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd h = randomVector(rng, 4, 3.0);
    const Eigen::VectorXd lq = randomLogPmf(rng, 4);
    const Eigen::VectorXd p = softmax(h);
    const double kl = (p.array() * (p.array().log() - lq.array())).sum();
    EXPECT_NEAR(mapObjective(h, lq), -kl, 1e-12);
    EXPECT_LE(mapObjective(h, lq), 1e-15);
    EXPECT_NEAR(mapObjective(lq, lq), 0.0, 1e-12);
  }
}

TEST(LogOdds, ConsensusStepExamples) {
  const Eigen::VectorXd hi = Eigen::Vector2d(0, 2);
  EXPECT_EQ(mapConsensusStep(hi, {{0.5, hi}, {0.2, hi}}, 0.1), hi);
  const Eigen::VectorXd out = mapConsensusStep(hi, {{0.5, Eigen::Vector2d(0, 4)}}, 0.1);
  EXPECT_EQ(out(0), 0.0);
  EXPECT_NEAR(out(1), 2.1, 1e-15);
  EXPECT_THROW(mapConsensusStep(hi, {{0.5, Eigen::Vector3d(0, 1, 2)}}, 0.1), DimensionError);
}

TEST(LogOdds, ConsensusStepIsConvexCombination) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int nb = 1 + trial % 4;
    Eigen::VectorXd h = randomVector(rng, 3, 5.0);
    h(0) = 0;
    std::vector<std::pair<double, Eigen::VectorXd>> neighbors;
    double wsum = 0.0;
    for (int j = 0; j < nb; ++j) {
      Eigen::VectorXd hj = randomVector(rng, 3, 5.0);
      hj(0) = 0;
      const double w = u(rng) / nb;
      wsum += w;
      neighbors.push_back({w, hj});
    }
    const double eps = u(rng) / wsum;
    const Eigen::VectorXd out = mapConsensusStep(h, neighbors, std::min(eps, 1.0 / wsum));
    for (int k = 0; k < 3; ++k) {
      double lo = h(k), hi = h(k);
      for (const auto& [w, hj] : neighbors) {
        lo = std::min(lo, hj(k));
        hi = std::max(hi, hj(k));
      }
      EXPECT_GE(out(k), lo - 1e-12);
      EXPECT_LE(out(k), hi + 1e-12);
    }
  }
}

TEST(LogOdds, EntropyExtremes) {
  EXPECT_NEAR(entropy(Eigen::VectorXd::Zero(4)), std::log(4.0), 1e-15);
  EXPECT_NEAR(entropy(Eigen::Vector3d(0, 800, 0)), 0.0, 1e-15);
  EXPECT_EQ(argmaxClass(Eigen::Vector3d(0, 1, 1)), 1);
}

TEST(InverseModel, NormalizedAndValidated) {
  const InverseModelParams p;
  const Eigen::VectorXd hit = hitLogLikelihood(p, 4, 2);
  EXPECT_NEAR(hit.array().exp().sum(), 1.0, 1e-15);
  EXPECT_NEAR(std::exp(hit(2)), 0.9, 1e-15);
  EXPECT_NEAR(std::exp(hit(1)), 0.1 / 3.0, 1e-15);
  const Eigen::VectorXd fr = freeLogLikelihood(p, 4);
  EXPECT_NEAR(std::exp(fr(0)), 0.7, 1e-15);
  EXPECT_NEAR(std::exp(fr(3)), 0.1, 1e-15);
  EXPECT_THROW((InverseModelParams{0.2, 0.7}.validate(4)), ConfigError);
  EXPECT_THROW((InverseModelParams{0.9, 0.5}.validate(4)), ConfigError);
  EXPECT_THROW(hitLogLikelihood(p, 4, 4), DimensionError);
}

TEST(Grid, IndexRoundTrip) {
  GridGeometry g;
  g.dims = Eigen::Vector3i(4, 3, 2);
  for (int n = 0; n < g.cellCount(); ++n) EXPECT_EQ(g.index(g.coords(n)), n);
  EXPECT_EQ(g.index(1, 2, 1), 1 + 4 * (2 + 3 * 1));
  g.cell_size = 0.0;
  EXPECT_THROW(g.validate(), GeometryError);
}

TEST(Grid, AxisRayHandTrace) {
  const GridGeometry g = lineGeometry();
  bool reached = false;
  const auto cells = traverseSegment(g, Eigen::Vector3d(0.0, 0.1, 0.1),
                                     Eigen::Vector3d(1.0, 0.1, 0.1), &reached);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_TRUE(reached);
  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(cells[k].index, k);
    EXPECT_NEAR(cells[k].t_enter, 0.2 * k, 1e-12);
  }
  // leaving the grid truncates the traversal
  const auto out = traverseSegment(g, Eigen::Vector3d(1.5, 0.1, 0.1),
                                   Eigen::Vector3d(3.0, 0.1, 0.1), &reached);
  EXPECT_FALSE(reached);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out.back().index, 9);
}

TEST(Grid, TraversalMatchesBoxIntersection) {
  GridGeometry g;
  g.dims = Eigen::Vector3i(6, 5, 4);
  g.cell_size = 0.3;
  g.origin = Eigen::Vector3d(-0.4, 0.2, -0.1);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 2.5);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Vector3d a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng));
    const auto cells = traverseSegment(g, a, b);
    std::set<int> got;
    double last_t = -1.0;
    for (const auto& c : cells) {
      got.insert(c.index);
      EXPECT_GE(c.t_enter, last_t);
      last_t = c.t_enter;
    }
    EXPECT_EQ(got.size(), cells.size());
    std::set<int> want;
    for (int n = 0; n < g.cellCount(); ++n) {
      const Eigen::Vector3d lo = g.origin + g.cell_size * g.coords(n).cast<double>();
      if (segmentCrossesBox(a, b, lo, lo + Eigen::Vector3d::Constant(g.cell_size))) want.insert(n);
    }
    EXPECT_EQ(got, want) << "trial " << trial;
  }
}

TEST(Grid, CastRayStopsAtFirstBlockedCell) {
  const GridGeometry g = lineGeometry();
  int hit = -1;
  const auto t = castRay(g, Eigen::Vector3d(0.05, 0.1, 0.1), Eigen::Vector3d::UnitX(), 5.0,
                         [](int n) { return n == 7; }, &hit);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(hit, 7);
  EXPECT_NEAR(*t, 1.35, 1e-12);
  EXPECT_FALSE(castRay(g, Eigen::Vector3d(0.05, 0.1, 0.1), Eigen::Vector3d::UnitX(), 1.0,
                       [](int n) { return n == 7; }, &hit));
}

TEST(SemanticGridTest, EmptyCloudLeavesMapUnchanged) {
  SemanticGrid map(lineGeometry(), 4);
  const auto touched = integratePointCloud(map, Pose(), {}, InverseModelParams{});
  EXPECT_TRUE(touched.empty());
  EXPECT_EQ(map.stamp(), 0u);
  EXPECT_EQ(map.logOddsMatrix().squaredNorm(), 0.0);
}

TEST(SemanticGridTest, SingleRayHandTrace) {
  SemanticGrid map(lineGeometry(), 4);
  const Pose sensor = Pose::planar(0.0, 0.1, 0.1, 0.0);
  SemanticRay ray;
  ray.range = 1.0;
  ray.category = 2;
  const auto touched = integratePointCloud(map, sensor, {ray}, InverseModelParams{});
  EXPECT_EQ(touched, (std::vector<int>{0, 1, 2, 3, 4, 5}));
  const Eigen::VectorXd free_q = Eigen::Vector4d(0.7, 0.1, 0.1, 0.1).array().log();
  const Eigen::VectorXd hit_q = Eigen::Vector4d(0.1 / 3, 0.1 / 3, 0.9, 0.1 / 3).array().log();
  for (int n = 0; n < 5; ++n) {
    EXPECT_LE((map.logQ(n) - free_q).norm(), 1e-14);
    EXPECT_EQ(map.mlClass(n), 0);
  }
  EXPECT_LE((map.logQ(5) - hit_q).norm(), 1e-14);
  EXPECT_EQ(map.mlClass(5), 2);
  EXPECT_FALSE(map.known(6));
  for (int n = 0; n < 6; ++n) EXPECT_EQ(map.h(n)(0), 0.0);
}

TEST(SemanticGridTest, RepeatedObservationConvergesToInverseModel) {
  SemanticGrid map(lineGeometry(), 4);
  const Pose sensor = Pose::planar(0.0, 0.1, 0.1, 0.0);
  SemanticRay ray;
  ray.range = 1.0;
  ray.category = 3;
  const Eigen::Vector4d want(0.1 / 3, 0.1 / 3, 0.1 / 3, 0.9);
  // the harmonic step converges slowly, so check the error keeps shrinking
  double prev = 2.0;
  for (int checkpoint : {10, 100, 1000, 10000}) {
    while (map.updateCount(5) < checkpoint)
      integratePointCloud(map, sensor, {ray}, InverseModelParams{});
    const double err = (map.pmf(5) - want).cwiseAbs().sum();
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 0.1);
  // fixed-point iteration oracle with a unit step converges tightly
  Eigen::VectorXd h = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd lq = want.array().log();
  for (int k = 0; k < 10000; ++k) {
    h += mapLocalGradient(h, lq);
    h(0) = 0.0;
  }
  EXPECT_LE((softmax(h) - want).cwiseAbs().sum(), 1e-10);
}

TEST(SemanticGridTest, DiscrepancyExampleAndBruteForce) {
  GridGeometry one;
  SemanticGrid a(one, 2), b(one, 2);
  a.setH(0, Eigen::Vector2d(0, 1));
  b.setH(0, Eigen::Vector2d(0, 3));
  const consensus::CommGraph g2(2, {{0, 1}});
  EXPECT_NEAR(mapDiscrepancy({&a, &b}, g2), 2.0, 1e-15);

  std::mt19937_64 rng(7);
  GridGeometry geo;
  geo.dims = Eigen::Vector3i(3, 2, 2);
  std::vector<SemanticGrid> maps(4, SemanticGrid(geo, 3));
  for (auto& m : maps)
    for (int n = 0; n < m.cellCount(); ++n) {
      Eigen::VectorXd h = randomVector(rng, 3, 2.0);
      h(0) = 0;
      m.setH(n, h);
    }
  const consensus::CommGraph ring(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  double brute = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int n = 0; n < geo.cellCount(); ++n)
        brute += ring.weight(i, j) * (maps[j].h(n) - maps[i].h(n)).squaredNorm();
  EXPECT_NEAR(mapDiscrepancy({&maps[0], &maps[1], &maps[2], &maps[3]}, ring), brute, 1e-12);
}

TEST(SemanticGridTest, NormalizedEntropyBruteForce) {
  GridGeometry geo;
  geo.dims = Eigen::Vector3i(2, 2, 1);
  SemanticGrid map(geo, 4);
  EXPECT_NEAR(normalizedEntropy(map), std::log(4.0), 1e-15);
  std::mt19937_64 rng(8);
  double brute = 0.0;
  for (int n = 0; n < 4; ++n) {
    Eigen::VectorXd h = randomVector(rng, 4, 3.0);
    h(0) = 0;
    map.setH(n, h);
    const Eigen::VectorXd e = h.array().exp();
    const Eigen::VectorXd p = e / e.sum();
    for (int c = 0; c < 4; ++c) brute -= p(c) * std::log(p(c));
  }
  EXPECT_NEAR(normalizedEntropy(map), brute / 4, 1e-14);
}

TEST(SemanticGridTest, SetHRejectsBadVectors) {
  SemanticGrid map(lineGeometry(), 3);
  EXPECT_THROW(map.setH(0, Eigen::Vector3d(1, 0, 0)), ManifoldConstraintError);
  EXPECT_THROW(map.setH(0, Eigen::Vector2d(0, 0)), DimensionError);
  EXPECT_THROW(map.setH(10, Eigen::Vector3d(0, 0, 0)), DimensionError);
  EXPECT_THROW(map.setH(0, Eigen::Vector3d(0, NAN, 0)), ManifoldConstraintError);
}

TEST(SemanticGridTest, MessagesRoundTripThroughWire) {
  SemanticGrid src(lineGeometry(), 4), dst(lineGeometry(), 4);
  const Pose sensor = Pose::planar(0.0, 0.1, 0.1, 0.0);
  SemanticRay ray;
  ray.range = 0.7;
  ray.category = 1;
  const std::uint64_t before = src.stamp();
  integratePointCloud(src, sensor, {ray}, InverseModelParams{});
  const auto changed = src.cellsChangedAfter(before);
  EXPECT_EQ(changed, (std::vector<int>{0, 1, 2, 3}));
  const auto bytes = netsim::serializeMap(src.toMessage(changed));
  EXPECT_EQ(bytes.size(), netsim::kMapHeaderBytes + 4 * (4 + 3 * 8));
  dst.applyMessage(netsim::deserializeMap(bytes));
  EXPECT_EQ(dst.logOddsMatrix(), src.logOddsMatrix());
  EXPECT_TRUE(dst.known(3));
  EXPECT_FALSE(dst.known(4));
}

TEST(SemanticGridTest, ConsensusOnlyMergesDisjointRegions) {
  SemanticGrid a(lineGeometry(), 4), b(lineGeometry(), 4);
  a.setH(1, Eigen::Vector4d(0, 3, 0, 0));
  a.markKnown(1);
  b.setH(8, Eigen::Vector4d(0, 0, 0, 4));
  b.markKnown(8);
  const consensus::CommGraph g(2, {{0, 1}});
  for (int round = 0; round < 500; ++round) {
    SemanticGrid a_prev = a;
    a.consensusStep({{g.weight(0, 1), &b}}, 0.1);
    b.consensusStep({{g.weight(1, 0), &a_prev}}, 0.1);
  }
  EXPECT_LE(mapDiscrepancy({&a, &b}, g), 1e-8);
  for (const auto* m : {&a, &b}) {
    EXPECT_EQ(m->mlClass(1), 1);
    EXPECT_EQ(m->mlClass(8), 3);
    EXPECT_TRUE(m->known(1) && m->known(8));
    EXPECT_NEAR(m->h(1)(1), 1.5, 1e-8);
  }
}

namespace {

SemanticGrid columnMap() {
  GridGeometry geo;
  geo.dims = Eigen::Vector3i(3, 1, 2);
  return SemanticGrid(geo, 4);
}

}  // namespace

TEST(Occupancy, ProjectionRules) {
  auto map = columnMap();
  const auto classes = TraversabilityClasses::withDefaultObstacles({1}, 4);
  EXPECT_EQ(classes.obstacle, (std::vector<int>{2, 3}));
  auto occ = mlProject2D(map, classes);
  EXPECT_EQ(occ.count(CellState::Unknown), 3);
  // column 0: ground only
  map.setH(map.geometry().index(0, 0, 0), Eigen::Vector4d(0, 2, 0, 0));
  map.markKnown(map.geometry().index(0, 0, 0));
  // column 1: ground below, obstacle above
  map.setH(map.geometry().index(1, 0, 0), Eigen::Vector4d(0, 2, 0, 0));
  map.markKnown(map.geometry().index(1, 0, 0));
  map.setH(map.geometry().index(1, 0, 1), Eigen::Vector4d(0, 0, 2, 0));
  map.markKnown(map.geometry().index(1, 0, 1));
  // column 2: only free air observed
  map.markKnown(map.geometry().index(2, 0, 1));
  occ = mlProject2D(map, classes);
  EXPECT_EQ(occ.at(0, 0), CellState::Free);
  EXPECT_EQ(occ.at(1, 0), CellState::Occupied);
  EXPECT_EQ(occ.at(2, 0), CellState::Occupied);
  EXPECT_NEAR(coverageArea(occ), 3 * 0.04, 1e-15);
  occ = mlProject2D(map, classes, NeutralColumns::Unknown);
  EXPECT_EQ(occ.at(0, 0), CellState::Free);
  EXPECT_EQ(occ.at(1, 0), CellState::Occupied);
  EXPECT_EQ(occ.at(2, 0), CellState::Unknown);
}

TEST(Occupancy, DistanceFieldExamples) {
  auto occ = OccupancyGrid2D::filled(8, 6, 0.5, Eigen::Vector2d::Zero(), CellState::Free);
  DistanceField empty(occ);
  EXPECT_EQ(empty.at(3, 3), 10 * 0.5 * 8);
  occ.at(0, 0) = CellState::Occupied;
  DistanceField df(occ);
  EXPECT_NEAR(df.at(3, 4), 2.5, 1e-12);
  EXPECT_NEAR(df.at(0, 0), 0.05, 1e-15);
  EXPECT_NEAR(df.at(Eigen::Vector2d(1.7, 2.2)), 2.5, 1e-12);
}

TEST(Occupancy, DistanceFieldMatchesBruteForce) {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution obstacle(0.08);
  for (int trial = 0; trial < 30; ++trial) {
    auto occ = OccupancyGrid2D::filled(13 + trial % 5, 9 + trial % 7, 0.2, Eigen::Vector2d(-1, 2),
                                       CellState::Free);
    for (auto& c : occ.cells)
      if (obstacle(rng)) c = CellState::Occupied;
    DistanceField df(occ);
    for (int y = 0; y < occ.ny; ++y)
      for (int x = 0; x < occ.nx; ++x) {
        double best = INFINITY;
        for (int v = 0; v < occ.ny; ++v)
          for (int u = 0; u < occ.nx; ++u)
            if (occ.at(u, v) == CellState::Occupied)
              best = std::min(best, (occ.center(x, y) - occ.center(u, v)).norm());
        const double want = std::clamp(std::isfinite(best) ? best : df.ceilingValue(),
                                       df.floorValue(), df.ceilingValue());
        EXPECT_NEAR(df.at(x, y), want, 1e-12);
      }
  }
}

TEST(Occupancy, SquaredDistanceTransform1D) {
  const double inf = INFINITY;
  const auto d = squaredDistanceTransform1D({inf, inf, 0.0, inf, inf, inf, 0.0, inf});
  EXPECT_EQ(d, (std::vector<double>{4, 1, 0, 1, 4, 1, 0, 1}));
  const auto none = squaredDistanceTransform1D({inf, inf});
  EXPECT_TRUE(std::isinf(none[0]) && std::isinf(none[1]));
}

TEST(Frontier, SingleFreeCellInUnknownSea) {
  auto occ = OccupancyGrid2D::filled(5, 5, 1.0, Eigen::Vector2d::Zero(), CellState::Unknown);
  occ.at(2, 2) = CellState::Free;
  const auto clusters = frontierClusters(occ);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].viewpoint_cell, occ.index(2, 2));
  const auto plan = frontierViewpoints(occ, Pose::planar(0.5, 0.5, 0.3, 0.0), 3);
  EXPECT_FALSE(plan.exploration_complete);
  ASSERT_EQ(plan.viewpoints.size(), 3u);
  EXPECT_LE((plan.viewpoints[0].translation() - Eigen::Vector3d(2.5, 2.5, 0.3)).norm(), 1e-12);
  EXPECT_NEAR(std::remainder(plan.viewpoints[1].yaw() - plan.viewpoints[0].yaw(), 2 * std::numbers::pi),
              std::numbers::pi / 2, 1e-9);
}

TEST(Frontier, FullyExploredSignalsCompletion) {
  auto occ = OccupancyGrid2D::filled(4, 4, 1.0, Eigen::Vector2d::Zero(), CellState::Free);
  occ.at(1, 1) = CellState::Occupied;
  const Pose start = Pose::planar(1.5, 2.5, 0.0, 0.3);
  const auto plan = frontierViewpoints(occ, start, 4);
  EXPECT_TRUE(plan.exploration_complete);
  ASSERT_EQ(plan.viewpoints.size(), 4u);
  for (const auto& p : plan.viewpoints)
    EXPECT_LE((p.translation() - start.translation()).norm(), 1e-15);
  EXPECT_NEAR(plan.viewpoints[2].yaw(), 0.3 + std::numbers::pi - 2 * std::numbers::pi, 1e-9);
}

TEST(Frontier, TwoRoomsLargerFirst) {
  // Left room 5x5 and right room 3x3 of FREE cells, walls in between, all
  // bordered by UNKNOWN on the outside.
  auto occ = OccupancyGrid2D::filled(14, 7, 1.0, Eigen::Vector2d::Zero(), CellState::Unknown);
  for (int y = 1; y <= 5; ++y)
    for (int x = 1; x <= 5; ++x) occ.at(x, y) = CellState::Free;
  for (int y = 0; y <= 6; ++y) occ.at(6, y) = occ.at(7, y) = CellState::Occupied;
  for (int y = 2; y <= 4; ++y)
    for (int x = 9; x <= 11; ++x) occ.at(x, y) = CellState::Free;
  const auto clusters = frontierClusters(occ);
  ASSERT_EQ(clusters.size(), 2u);
  const auto plan = frontierViewpoints(occ, Pose::planar(12.5, 3.5, 0.0, 0.0), 2);
  ASSERT_EQ(plan.viewpoints.size(), 2u);
  EXPECT_LT(plan.viewpoints[0].translation().x(), 6.0);
  EXPECT_GT(plan.viewpoints[1].translation().x(), 8.0);
}
