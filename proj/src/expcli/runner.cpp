#include "riemcon/expcli/runner.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>

#include "riemcon/errors.hpp"
#include "riemcon/mapping/occupancy.hpp"
#include "riemcon/netsim/topology.hpp"
#include "riemcon/netsim/wire.hpp"
#include "riemcon/planner/iteration.hpp"
#include "riemcon/planner/astar.hpp"
#include "riemcon/planner/ledger.hpp"
#include "riemcon/world/world.hpp"

namespace riemcon::expcli {

using manifold::Pose;
using mapping::CellState;
using netsim::MessageKind;

namespace {

struct Step {
  Eigen::Vector2i cell;
  double yaw;
};

struct Robot {
  Robot(mapping::SemanticGrid m, world::Rng r) : map(std::move(m)), rng(std::move(r)) {}

  mapping::SemanticGrid map;
  world::Rng rng;
  std::map<int, mapping::SemanticGrid> mirrors;
  std::map<int, std::uint64_t> sent_stamp;
  Pose pose;
  Pose start;
  std::deque<Step> steps;
  double distance = 0.0;
  std::vector<bool> ledger;
  std::vector<std::vector<bool>> ledger_inbox;
  std::vector<Pose> known_poses;
  planner::TeamPlan plan;
  std::map<int, planner::TeamPlan> plan_buffer;
  std::set<int> bumped;  ///< 2-D cells the robot failed to enter
};

consensus::CommGraph buildGraph(const ScenarioConfig& c) {
  if (c.n_robots == 1) return consensus::CommGraph(1, {});
  return netsim::buildTopology({c.topology, c.n_robots, c.teams});
}

netsim::LinkSchedule buildSchedule(const ScenarioConfig& c) {
  netsim::LinkSchedule s;
  for (const auto& o : c.outages) s.addOutage(o.i, o.j, o.from, o.to);
  return s;
}

/// Turns a trajectory into per-tick steps. Moving steps face the direction
/// of travel, except that arriving at a waypoint takes that waypoint's yaw.
/// A waypoint that needs no movement costs one tick of turning in place.
std::deque<Step> buildSteps(const planner::Trajectory& traj, const std::vector<Pose>& waypoints) {
  std::deque<Step> steps;
  int next = 1;
  for (std::size_t w = 0; w < waypoints.size(); ++w) {
    const int end = traj.waypoint_index[w];
    const double yaw = waypoints[w].yaw();
    if (end < next) {
      steps.push_back({traj.cells[end], yaw});
      continue;
    }
    for (int k = next; k <= end; ++k) {
      const Eigen::Vector2i d = traj.cells[k] - traj.cells[k - 1];
      steps.push_back({traj.cells[k], k == end ? yaw : std::atan2(d.y(), d.x())});
    }
    next = end + 1;
  }
  return steps;
}

class Runner {
 public:
  explicit Runner(const ScenarioConfig& config)
      : cfg_(config),
        params_(config.effectivePlanner()),
        world_(world::loadWorld(config.world)),
        graph_(buildGraph(config)),
        net_(graph_, buildSchedule(config), config.link_delay),
        classes_(mapping::TraversabilityClasses::withDefaultObstacles(world_.traversable(),
                                                                      world_.classesPlusOne())) {
    const auto& g = world_.geometry();
    const auto& starts = cfg_.starts.empty() ? world_.starts() : cfg_.starts;
    truth_free_.assign(g.columnCount(), 0);
    for (int y = 0; y < g.dims.y(); ++y)
      for (int x = 0; x < g.dims.x(); ++x) {
        bool drivable = false, blocked = false;
        for (int z = 0; z < g.dims.z(); ++z) {
          const int label = world_.label(x, y, z);
          if (label == 0) continue;
          const auto& t = classes_.traversable;
          (std::find(t.begin(), t.end(), label) != t.end() ? drivable : blocked) = true;
        }
        truth_free_[x + g.dims.x() * y] = drivable && !blocked;
      }
    std::vector<Pose> start_poses;
    for (int i = 0; i < cfg_.n_robots; ++i) {
      const Eigen::Vector4d& s = starts[i];
      start_poses.push_back(Pose::planar(s.x(), s.y(), s.z(), s.w()));
    }
    for (int i = 0; i < cfg_.n_robots; ++i) {
      Robot r{mapping::SemanticGrid(g, world_.classesPlusOne(), cfg_.mapping.alpha_scale),
              world::Rng(cfg_.seed, static_cast<std::uint64_t>(i))};
      r.pose = r.start = start_poses[i];
      r.ledger.assign(cfg_.n_robots, false);
      r.known_poses = start_poses;
      r.map.setNormalizeEvidence(cfg_.mapping.normalize_evidence);
      for (int j : graph_.neighbors(i)) {
        r.mirrors.emplace(j, mapping::SemanticGrid(g, world_.classesPlusOne()));
        r.sent_stamp[j] = 0;
      }
      robots_.push_back(std::move(r));
    }
  }

  ScenarioResult run() {
    ScenarioResult out;
    out.notes = cfg_.modeOverrides();
    record(0);
    int tick = 0;
    for (tick = 1; tick <= cfg_.ticks; ++tick) exploreTick(tick);
    tick = cfg_.ticks;
    if (cfg_.ticks > 0) tick = returnToBase(tick);
    tick = finalEpoch(tick);
    counters_.last_tick = tick;
    counters_.final_phi_map = phiMap();

    out.records = std::move(records_);
    for (auto& r : robots_) out.maps.push_back(r.map);
    out.class_names = world_.classNames();
    out.envelopes = net_.log();
    out.link_delay = cfg_.link_delay;
    out.counters = counters_;
    return out;
  }

 private:
  int n() const { return cfg_.n_robots; }

  mapping::OccupancyGrid2D occupancy(int i, bool force_own_free) const {
    const Robot& r = robots_[i];
    auto occ = mapping::mlProject2D(r.map, classes_, mapping::NeutralColumns::Unknown);
    for (int c : r.bumped) occ.cells[c] = CellState::Occupied;
    if (force_own_free) {
      const Eigen::Vector2i cell = occ.clampedCellOf(r.pose.translation().head<2>());
      occ.at(cell.x(), cell.y()) = CellState::Free;
    }
    return occ;
  }

  void dispatch(std::vector<std::vector<netsim::Envelope>> inbox) {
    for (int i = 0; i < n(); ++i)
      for (auto& env : inbox[i]) {
        Robot& r = robots_[i];
        switch (env.kind) {
          case MessageKind::Map:
            r.mirrors.at(env.src).applyMessage(netsim::deserializeMap(env.payload));
            break;
          case MessageKind::Plan:
            r.plan_buffer[env.src] = netsim::deserializePlan(env.payload);
            break;
          case MessageKind::Ledger:
            r.ledger_inbox.push_back(netsim::deserializeLedger(env.payload));
            break;
          case MessageKind::Pose:
            r.known_poses[env.src] = netsim::deserializePose(env.payload);
            break;
        }
      }
  }

  void exploreTick(int tick) {
    std::vector<int> starting;
    if (tick % cfg_.t_pub_p == 0) starting = ledgerSync(tick);
    if (!starting.empty()) planningSession(starting, tick);
    for (int i = 0; i < n(); ++i) move(i);
    for (int i = 0; i < n(); ++i) {
      Robot& r = robots_[i];
      const auto rays = world::sense(world_, r.pose, cfg_.sensor, r.rng);
      mapping::integratePointCloud(r.map, r.pose, rays, cfg_.mapping.inverse_model);
    }
    mapCadence(tick, true);
    endTick(tick);
  }

  /// Map consensus and publication on their cadences.
  void mapCadence(int tick, bool count) {
    if (tick % cfg_.mapping.t_int == 0) {
      for (int i = 0; i < n(); ++i) {
        if (consensusStep(i, tick, true) && count) ++counters_.map_consensus_steps;
      }
    }
    if (tick % cfg_.mapping.t_pub == 0) publishMaps(tick);
  }

  bool consensusStep(int i, int tick, bool local_steps) {
    Robot& r = robots_[i];
    std::vector<std::pair<double, const mapping::SemanticGrid*>> nbrs;
    for (int j : net_.liveNeighbors(i, tick)) nbrs.push_back({graph_.weight(i, j), &r.mirrors.at(j)});
    if (nbrs.empty()) return false;
    const auto changed = r.map.consensusStep(nbrs, cfg_.mapping.eps_m);
    if (local_steps) r.map.localSteps(changed);
    return true;
  }

  void publishMaps(int tick) {
    for (int i = 0; i < n(); ++i) {
      Robot& r = robots_[i];
      for (int j : graph_.neighbors(i)) {
        if (!net_.linkUp(i, j, tick)) continue;
        const auto cells = r.map.cellsChangedAfter(r.sent_stamp[j]);
        if (cells.empty()) continue;
        const std::uint64_t now = r.map.stamp();
        if (net_.send(i, j, MessageKind::Map, netsim::serializeMap(r.map.toMessage(cells)), tick))
          r.sent_stamp[j] = now;
      }
    }
  }

  void endTick(int tick) {
    for (int i = 0; i < n(); ++i)
      net_.broadcast(i, MessageKind::Pose, netsim::serializePose(robots_[i].pose), tick);
    dispatch(net_.deliver(tick));
    record(tick);
  }

  std::vector<int> ledgerSync(int tick) {
    std::vector<int> starting;
    for (int i = 0; i < n(); ++i) {
      Robot& r = robots_[i];
      const bool ready = r.steps.empty();
      std::vector<std::vector<bool>> incoming = std::move(r.ledger_inbox);
      r.ledger_inbox.clear();
      if (incoming.empty()) incoming.push_back(r.ledger);
      bool start = false;
      for (const auto& inc : incoming) {
        const auto step = planner::ledgerSync(r.ledger, inc, i, false, ready, params_.thresh_p);
        r.ledger = step.ledger;
        start = start || step.start_planning;
      }
      if (start) starting.push_back(i);
      net_.broadcast(i, MessageKind::Ledger, netsim::serializeLedger(r.ledger), tick);
    }
    return starting;
  }

  void planningSession(const std::vector<int>& members, int tick) {
    std::map<int, std::unique_ptr<planner::EntropyScoreField>> fields;
    for (int i : members) {
      Robot& r = robots_[i];
      std::vector<Pose> poses = r.known_poses;
      poses[i] = r.pose;
      r.plan = planner::initialTeamPlan(occupancy(i, true), poses, params_.horizon);
      if (params_.k_p > 0)
        fields[i] = std::make_unique<planner::EntropyScoreField>(r.map, cfg_.sensor, params_.gamma_c,
                                                                 classes_);
      ++counters_.planning_sessions;
    }
    for (int k = 0; k < params_.k_p; ++k) {
      for (int i : members)
        net_.broadcast(i, MessageKind::Plan, netsim::serializePlan(robots_[i].plan), tick);
      dispatch(net_.deliver(tick));
      for (int i : members) {
        Robot& r = robots_[i];
        std::vector<planner::NeighborPlan> nbrs;
        for (int j : graph_.neighbors(i)) {
          const auto it = r.plan_buffer.find(j);
          if (it != r.plan_buffer.end()) nbrs.push_back({graph_.weight(i, j), &it->second});
        }
        planner::ConsensusStats stats;
        r.plan = planner::plannerIteration(r.plan, i, nbrs, *fields.at(i), params_, k, true, &stats);
        counters_.plan_consensus_terms += stats.terms;
        counters_.plan_consensus_skips += stats.cut_locus_skips;
        ++counters_.plan_iterations;
      }
      for (auto& r : robots_) r.plan_buffer.clear();
    }
    for (int i : members) {
      Robot& r = robots_[i];
      const auto traj = planner::astarTrajectory(occupancy(i, true), r.pose, r.plan[i]);
      for (bool s : traj.substituted) counters_.waypoint_substitutions += s ? 1 : 0;
      r.steps = buildSteps(traj, r.plan[i]);
    }
  }

  void move(int i) {
    Robot& r = robots_[i];
    if (r.steps.empty()) return;
    const Step s = r.steps.front();
    const auto& g = world_.geometry();
    const Eigen::Vector3d p = r.pose.translation();
    const Eigen::Vector3i cur = g.cellOf(p);
    const Eigen::Vector2i d = s.cell - cur.head<2>();
    if (d.isZero()) {
      r.pose = Pose::planar(p.x(), p.y(), p.z(), s.yaw);
      r.steps.pop_front();
      return;
    }
    const int col = s.cell.x() + g.dims.x() * s.cell.y();
    const bool inside = s.cell.x() >= 0 && s.cell.y() >= 0 && s.cell.x() < g.dims.x() &&
                        s.cell.y() < g.dims.y();
    if (!inside || !truth_free_[col]) {
      if (inside) r.bumped.insert(col);
      r.steps.clear();
      ++counters_.blocked_moves;
      return;
    }
    const Eigen::Vector3d c = g.center(Eigen::Vector3i(s.cell.x(), s.cell.y(), cur.z()));
    r.distance += g.cell_size * d.cast<double>().norm();
    r.pose = Pose::planar(c.x(), c.y(), p.z(), s.yaw);
    r.steps.pop_front();
  }

  int returnToBase(int tick) {
    auto planHome = [&](int i) {
      Robot& r = robots_[i];
      auto occ = occupancy(i, true);
      const Eigen::Vector2i home = occ.clampedCellOf(r.start.translation().head<2>());
      if (!r.bumped.count(occ.index(home.x(), home.y()))) occ.at(home.x(), home.y()) = CellState::Free;
      const auto traj = planner::astarTrajectory(occ, r.pose, {r.start});
      r.steps = buildSteps(traj, {r.start});
    };
    for (int i = 0; i < n(); ++i) planHome(i);
    const auto& g = world_.geometry();
    const int limit = 4 * g.columnCount();
    for (int k = 0; k < limit; ++k) {
      bool all_home = true;
      for (const auto& r : robots_) all_home = all_home && r.steps.empty();
      if (all_home) break;
      ++tick;
      ++counters_.return_ticks;
      for (int i = 0; i < n(); ++i) {
        const int blocked_before = counters_.blocked_moves;
        move(i);
        if (counters_.blocked_moves != blocked_before) planHome(i);
      }
      mapCadence(tick, false);
      endTick(tick);
    }
    return tick;
  }

  int finalEpoch(int tick) {
    for (int round = 0; round < cfg_.final_epoch_max_rounds; ++round) {
      if (phiMap() < cfg_.final_epoch_tolerance) break;
      ++tick;
      publishMaps(tick);
      dispatch(net_.deliver(tick));
      for (int i = 0; i < n(); ++i) consensusStep(i, tick, false);
      ++counters_.final_epoch_rounds;
      record(tick);
    }
    counters_.final_epoch_converged = phiMap() < cfg_.final_epoch_tolerance;
    return tick;
  }

  double phiMap() const {
    std::vector<const mapping::SemanticGrid*> maps;
    for (const auto& r : robots_) maps.push_back(&r.map);
    return mapping::mapDiscrepancy(maps, graph_);
  }

  /// Plan discrepancy over edges whose endpoints both hold a plan.
  double phiPlan() const {
    double total = 0.0;
    for (const auto& [i, j] : graph_.edges()) {
      const auto& a = robots_[i].plan;
      const auto& b = robots_[j].plan;
      if (a.empty() || b.empty()) continue;
      double d = 0.0;
      for (std::size_t l = 0; l < a.size(); ++l)
        for (std::size_t t = 0; t < a[l].size(); ++t) d += planner::planPoseDist2(a[l][t], b[l][t], params_.gamma);
      total += graph_.weight(i, j) * d;
    }
    return total;
  }

  void record(int tick) {
    const double phi_map = phiMap();
    const double phi_plan = phiPlan();
    for (int i = 0; i < n(); ++i) {
      const Robot& r = robots_[i];
      MetricsRecord m;
      m.tick = tick;
      m.robot = i;
      m.coverage_m2 = mapping::coverageArea(mapping::mlProject2D(r.map, classes_));
      m.h_norm = mapping::normalizedEntropy(r.map);
      m.phi_map = phi_map;
      m.phi_plan = phi_plan;
      m.bytes_tx = net_.txBytes(i);
      m.bytes_rx = net_.rxBytes(i);
      m.distance_m = r.distance;
      records_.push_back(m);
    }
  }

  const ScenarioConfig& cfg_;
  planner::PlannerParams params_;
  world::GroundTruthWorld world_;
  consensus::CommGraph graph_;
  netsim::Network net_;
  mapping::TraversabilityClasses classes_;
  std::vector<std::uint8_t> truth_free_;
  std::vector<Robot> robots_;
  std::vector<MetricsRecord> records_;
  RunCounters counters_;
};

}  // namespace

ScenarioResult runScenario(const ScenarioConfig& config) {
  config.validate();
  Runner runner(config);
  return runner.run();
}

void writeScenarioOutputs(const ScenarioResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::filesystem::path& p, std::ios::openmode mode) {
    std::ofstream f(p, mode);
    if (!f) throw Error("cannot write " + p.string());
    return f;
  };
  {
    auto f = open(dir / "metrics.csv", std::ios::out);
    writeMetricsCsv(f, result.records);
  }
  {
    auto f = open(dir / "envelopes.jsonl", std::ios::out);
    netsim::writeLogEntries(f, result.envelopes);
  }
  for (std::size_t i = 0; i < result.maps.size(); ++i) {
    auto f = open(dir / ("robot_" + std::to_string(i) + ".rmap"), std::ios::out | std::ios::binary);
    writeMapSnapshot(f, result.maps[i], static_cast<int>(i), result.class_names);
  }
}

consensus::EigenDemoResult runEigenDemoToTrace(const EigenDemoSettings& s, std::ostream& trace) {
  auto problems = s.problems();
  if (!problems.empty()) throw ConfigError(std::move(problems));
  consensus::EigenDemoConfig c;
  c.points = s.points;
  c.seed = s.seed;
  c.split = s.split;
  c.epsilon = s.epsilon;
  c.alpha_scale = s.alpha_scale;
  c.iterations = s.iterations;
  auto result = consensus::runEigenDemo(c);
  consensus::writeEigenTrace(trace, result);
  return result;
}

}  // namespace riemcon::expcli
