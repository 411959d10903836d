#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <queue>
#include <sstream>

#include "riemcon/errors.hpp"
#include "riemcon/expcli/runner.hpp"
#include "riemcon/mapping/occupancy.hpp"
#include "riemcon/world/world.hpp"

using namespace riemcon;
using namespace riemcon::expcli;
using nlohmann::json;

namespace {

const std::filesystem::path kData = RIEMCON_DATA_DIR;

ScenarioConfig baseConfig(const std::string& world, int robots, int ticks) {
  ScenarioConfig c;
  c.world = kData / "worlds" / world;
  c.n_robots = robots;
  c.ticks = ticks;
  c.seed = 3;
  c.planner.xi_max = 0.8;
  c.planner.d_q = 0.8;
  c.planner.alpha_scale = 2.5e-4;
  c.planner.gamma_q = 4.0;
  c.sensor.max_range = 0.8;
  return c;
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
  for (const auto& p : problems)
    if (p.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<MetricsRecord> robotRows(const ScenarioResult& r, int robot) {
  std::vector<MetricsRecord> out;
  for (const auto& m : r.records)
    if (m.robot == robot) out.push_back(m);
  return out;
}

}  // namespace

TEST(ScenarioConfig, ParsesJsonWithDefaults) {
  const json j = json::parse(R"({
    "world": "worlds/village16.world", "n_robots": 2, "topology": "ring", "mode": "egocentric",
    "ticks": 10, "seed": 7, "planner": {"xi_max": 0.5, "gamma": [1, 1, 1, 0.2, 0.2, 0.2]},
    "mapping": {"eps_m": 0.2}, "sensor": {"max_range": 1.0},
    "outages": [{"i": 0, "j": 1, "from": 2, "to": 4}]
  })");
  const ScenarioConfig c = parseScenarioConfig(j, kData);
  EXPECT_EQ(c.world, kData / "worlds/village16.world");
  EXPECT_EQ(c.n_robots, 2);
  EXPECT_EQ(c.topology, netsim::TopologyKind::Ring);
  EXPECT_EQ(c.mode, PlanningMode::Egocentric);
  EXPECT_DOUBLE_EQ(c.planner.xi_max, 0.5);
  EXPECT_DOUBLE_EQ(c.planner.eps_p, 0.1);
  EXPECT_DOUBLE_EQ(c.planner.gamma.gamma()(3), 0.2);
  EXPECT_DOUBLE_EQ(c.mapping.eps_m, 0.2);
  EXPECT_EQ(c.mapping.t_pub, 5);
  EXPECT_DOUBLE_EQ(c.sensor.max_range, 1.0);
  ASSERT_EQ(c.outages.size(), 1u);
  EXPECT_EQ(c.outages[0].to, 4);
}

TEST(ScenarioConfig, ParseReportsEveryKeyProblem) {
  const json j = json::parse(R"({"n_robots": "three", "colour": 1, "planner": {"k_p": 1.5, "zeta": 0}})");
  try {
    parseScenarioConfig(j, ".");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(mentions(e.problems(), "config.n_robots"));
    EXPECT_TRUE(mentions(e.problems(), "config.colour"));
    EXPECT_TRUE(mentions(e.problems(), "planner.k_p"));
    EXPECT_TRUE(mentions(e.problems(), "planner.zeta"));
  }
}

TEST(ScenarioConfig, ValidationListsAllProblems) {
  ScenarioConfig c = baseConfig("village16.world", 4, -1);
  c.mapping.eps_m = 0.6;
  c.planner.thresh_p = 1.5;
  c.sensor.rays_h = 0;
  c.link_delay = -2;
  const auto p = c.problems();
  EXPECT_TRUE(mentions(p, "ticks"));
  EXPECT_TRUE(mentions(p, "eps_m"));
  EXPECT_TRUE(mentions(p, "thresh"));
  EXPECT_TRUE(mentions(p, "sensor"));
  EXPECT_TRUE(mentions(p, "link_delay"));
  EXPECT_TRUE(mentions(p, "start poses"));  // the fixture defines three
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ScenarioConfig, StepSizeGate) {
  ScenarioConfig c = baseConfig("village16.world", 3, 0);
  EXPECT_TRUE(c.problems().empty());
  c.mapping.eps_m = 0.49;
  EXPECT_TRUE(c.problems().empty());
  c.mapping.eps_m = 0.5;
  EXPECT_TRUE(mentions(c.problems(), "eps_m"));
  c.mapping.eps_m = 0.1;
  c.planner.eps_p = 0.6;
  EXPECT_TRUE(mentions(c.problems(), "eps_p"));

  EigenDemoSettings e;
  e.epsilon = 0.49;
  EXPECT_TRUE(e.problems().empty());
  e.epsilon = 0.6;
  EXPECT_FALSE(e.problems().empty());
}

TEST(ScenarioConfig, RejectsBadWorldStartsAndOutages) {
  ScenarioConfig c = baseConfig("missing.world", 3, 0);
  EXPECT_TRUE(mentions(c.problems(), "world"));
  c = baseConfig("village16.world", 3, 0);
  c.starts = {{0.1, 0.1, 0.3, 0.0}, {1.5, 1.5, 0.3, 0.0}, {9.0, 1.5, 0.3, 0.0}};
  c.outages = {{0, 5, 1, 2}, {0, 1, 3, 3}};
  const auto p = c.problems();
  EXPECT_TRUE(mentions(p, "start 0 is not on a traversable column"));
  EXPECT_TRUE(mentions(p, "start 2 lies outside"));
  EXPECT_TRUE(mentions(p, "outage endpoint"));
  EXPECT_TRUE(mentions(p, "down_from < up_at"));
}

TEST(ScenarioConfig, ModeRulesAreEnforced) {
  ScenarioConfig c = baseConfig("village16.world", 3, 0);
  c.mode = PlanningMode::Egocentric;
  auto p = c.effectivePlanner();
  EXPECT_EQ(p.eps_p, 0.0);
  EXPECT_EQ(p.gamma_q, 0.0);
  EXPECT_EQ(p.k_p, 20);
  EXPECT_EQ(c.modeOverrides().size(), 2u);
  c.mode = PlanningMode::Frontier;
  p = c.effectivePlanner();
  EXPECT_EQ(p.k_p, 0);
  EXPECT_DOUBLE_EQ(p.eps_p, 0.1);
}

TEST(MetricsCsv, EmptyIsHeaderOnly) {
  std::ostringstream out;
  writeMetricsCsv(out, {});
  EXPECT_EQ(out.str(), std::string(kMetricsHeader) + "\n");
}

TEST(MetricsCsv, OneRecordIsTwoLinesAndRoundTrips) {
  MetricsRecord r{3, 1, 1.25, 0.123456789123, 1e-9, 2.0 / 3.0, 1000, 999, 0.2 * std::sqrt(2.0)};
  std::ostringstream out;
  writeMetricsCsv(out, {r});
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  std::istringstream in(text);
  const auto back = readMetricsCsv(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].tick, 3);
  EXPECT_EQ(back[0].bytes_rx, 999u);
  EXPECT_NEAR(back[0].h_norm, r.h_norm, 1e-9 * r.h_norm);
  EXPECT_NEAR(back[0].phi_plan, r.phi_plan, 1e-9);
  // a second pass is exact: 9 significant digits are a fixed point
  std::ostringstream again;
  writeMetricsCsv(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(MetricsCsv, RejectsUnsortedAndBadInput) {
  MetricsRecord a, b;
  a.tick = 1;
  std::ostringstream out;
  EXPECT_THROW(writeMetricsCsv(out, {a, b}), DimensionError);
  std::istringstream wrong("tick,robot,coverage\n");
  EXPECT_THROW(readMetricsCsv(wrong), ParseError);
  std::istringstream bad(std::string(kMetricsHeader) + "\n1,0,x,0,0,0,0,0,0\n");
  try {
    readMetricsCsv(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 5);
  }
}

TEST(MapSnapshot, RoundTrip) {
  mapping::GridGeometry g;
  g.dims = {3, 2, 2};
  mapping::SemanticGrid map(g, 3);
  Eigen::VectorXd h(3);
  h << 0.0, 1.5, -0.25;
  map.setH(4, h);
  map.markKnown(4);
  std::stringstream s;
  writeMapSnapshot(s, map, 2, {"free", "a", "b"});
  const MapSnapshot back = readMapSnapshot(s);
  EXPECT_EQ(back.robot, 2);
  EXPECT_EQ(back.class_names[2], "b");
  EXPECT_TRUE(back.map.geometry() == g);
  EXPECT_TRUE(back.map.logOddsMatrix() == map.logOddsMatrix());
  EXPECT_EQ(back.map.knownCells(), std::vector<int>{4});
}

TEST(Scenario, ZeroTicksGivesOnlyInitialRows) {
  const auto r = runScenario(baseConfig("village16.world", 3, 0));
  ASSERT_EQ(r.records.size(), 3u);
  for (const auto& m : r.records) EXPECT_EQ(m.tick, 0);
  EXPECT_TRUE(r.envelopes.empty());
  EXPECT_EQ(r.counters.final_epoch_rounds, 0);
}

TEST(Scenario, InvalidConfigThrowsBeforeRunning) {
  ScenarioConfig c = baseConfig("village16.world", 3, 5);
  c.mapping.eps_m = 0.7;
  EXPECT_THROW(runScenario(c), ConfigError);
}

TEST(Scenario, SingleRobotFrontierCoversTworoom) {
  ScenarioConfig c = baseConfig("tworoom.world", 1, 400);
  c.mode = PlanningMode::Frontier;
  const auto r = runScenario(c);
  const auto rows = robotRows(r, 0);
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_GE(rows[k].coverage_m2, rows[k - 1].coverage_m2);

  // every traversable column reachable from the start is known at the end
  const auto w = world::loadWorld(c.world);
  const auto& g = w.geometry();
  auto drivable = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < g.dims.x() && y < g.dims.y() && w.label(x, y, 0) != 0 &&
           w.label(x, y, 1) == 0;
  };
  const Eigen::Vector3i s = g.cellOf(w.starts()[0].head<3>());
  std::vector<int> seen(g.columnCount(), 0);
  std::queue<Eigen::Vector2i> q;
  q.push(s.head<2>());
  seen[s.x() + g.dims.x() * s.y()] = 1;
  int reachable = 0, known = 0;
  const auto occ = mapping::mlProject2D(
      r.maps[0], mapping::TraversabilityClasses::withDefaultObstacles(w.traversable(), w.classesPlusOne()));
  while (!q.empty()) {
    const Eigen::Vector2i c2 = q.front();
    q.pop();
    ++reachable;
    known += occ.at(c2.x(), c2.y()) != mapping::CellState::Unknown;
    for (const auto& d : {Eigen::Vector2i(1, 0), Eigen::Vector2i(-1, 0), Eigen::Vector2i(0, 1), Eigen::Vector2i(0, -1)}) {
      const Eigen::Vector2i nb = c2 + d;
      if (!drivable(nb.x(), nb.y()) || seen[nb.x() + g.dims.x() * nb.y()]) continue;
      seen[nb.x() + g.dims.x() * nb.y()] = 1;
      q.push(nb);
    }
  }
  EXPECT_EQ(reachable, 10 * 6 - 4);  // interior minus the wall segments
  EXPECT_EQ(known, reachable);
  EXPECT_EQ(r.counters.plan_iterations, 0);
  EXPECT_EQ(r.counters.final_epoch_rounds, 0);  // one robot has nothing to agree with
}

TEST(Scenario, DeterministicPerSeedAndCountersMatchLog) {
  ScenarioConfig c = baseConfig("village16.world", 3, 60);
  const auto a = runScenario(c);
  const auto b = runScenario(c);
  std::ostringstream ca, cb;
  writeMetricsCsv(ca, a.records);
  writeMetricsCsv(cb, b.records);
  EXPECT_EQ(ca.str(), cb.str());
  c.seed = 4;
  std::ostringstream cc;
  writeMetricsCsv(cc, runScenario(c).records);
  EXPECT_NE(ca.str(), cc.str());

  for (int i = 0; i < 3; ++i) {
    std::uint64_t tx = 0, rx = 0;
    for (const auto& e : a.envelopes) {
      if (e.src == i) tx += e.bytes;
      if (e.dst == i) rx += e.bytes;
    }
    const auto rows = robotRows(a, i);
    EXPECT_EQ(rows.back().bytes_tx, tx);
    EXPECT_EQ(rows.back().bytes_rx, rx);
  }
  EXPECT_TRUE(a.counters.final_epoch_converged);
  EXPECT_LT(a.records.back().phi_map, 1e-8);
  EXPECT_GT(a.counters.plan_consensus_terms, 0);
}

TEST(Scenario, EgocentricRunsNoPlanConsensus) {
  ScenarioConfig c = baseConfig("village16.world", 3, 60);
  c.mode = PlanningMode::Egocentric;
  const auto r = runScenario(c);
  EXPECT_GT(r.counters.plan_iterations, 0);
  EXPECT_EQ(r.counters.plan_consensus_terms, 0);
  EXPECT_EQ(r.counters.plan_consensus_skips, 0);
}

TEST(Scenario, OutageStopsTraffic) {
  ScenarioConfig c = baseConfig("village16.world", 3, 30);
  c.outages = {{0, 1, 5, 20}, {0, 2, 5, 20}};
  const auto r = runScenario(c);
  for (const auto& e : r.envelopes)
    if (e.tick >= 5 && e.tick < 20) {
      EXPECT_NE(e.src, 0);
      EXPECT_NE(e.dst, 0);
    }
}

TEST(Scenario, WritesOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "riemcon_expcli_test";
  std::filesystem::remove_all(dir);
  const auto r = runScenario(baseConfig("village16.world", 2, 12));
  writeScenarioOutputs(r, dir);
  std::ifstream csv(dir / "metrics.csv");
  std::ostringstream from_file, from_memory;
  writeMetricsCsv(from_file, readMetricsCsv(csv));
  writeMetricsCsv(from_memory, r.records);
  EXPECT_EQ(from_file.str(), from_memory.str());
  std::ifstream log(dir / "envelopes.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(log, line)) {
    const auto j = json::parse(line);
    EXPECT_TRUE(j.contains("kind"));
    ++lines;
  }
  EXPECT_EQ(lines, r.envelopes.size());
  std::ifstream snap(dir / "robot_1.rmap", std::ios::binary);
  EXPECT_TRUE(readMapSnapshot(snap).map.logOddsMatrix() == r.maps[1].logOddsMatrix());
  std::filesystem::remove_all(dir);
}
