#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "riemcon/consensus/eigen_demo.hpp"
#include "riemcon/expcli/config.hpp"
#include "riemcon/expcli/metrics.hpp"
#include "riemcon/mapping/semantic_grid.hpp"
#include "riemcon/netsim/network.hpp"

namespace riemcon::expcli {

/// Instrumentation gathered during a run.
struct RunCounters {
  int planning_sessions = 0;       ///< robot-sessions of viewpoint planning
  int plan_iterations = 0;         ///< planner iterations summed over robots
  int plan_consensus_terms = 0;    ///< neighbor terms applied in plan consensus
  int plan_consensus_skips = 0;    ///< terms dropped at the cut locus
  int waypoint_substitutions = 0;  ///< unreachable waypoints replaced
  int blocked_moves = 0;           ///< path steps refused by the map or the world
  int map_consensus_steps = 0;     ///< per-robot map consensus steps during exploration
  int return_ticks = 0;            ///< ticks spent driving back to the start cells
  int final_epoch_rounds = 0;
  double final_phi_map = 0.0;
  bool final_epoch_converged = false;
  int last_tick = 0;
};

struct ScenarioResult {
  std::vector<MetricsRecord> records;
  std::vector<mapping::SemanticGrid> maps;
  std::vector<std::string> class_names;
  std::vector<netsim::LogEntry> envelopes;
  int link_delay = 0;
  RunCounters counters;
  std::vector<std::string> notes;  ///< mode overrides applied
};

/// Runs the tick loop, the drive back to the start cells, and the closing
/// consensus-only epoch. Validates the configuration first.
ScenarioResult runScenario(const ScenarioConfig& config);

/// metrics.csv, envelopes.jsonl and robot_<i>.rmap under dir.
void writeScenarioOutputs(const ScenarioResult& result, const std::filesystem::path& dir);

/// Runs the eigenvector demo and writes its per-iteration trace.
consensus::EigenDemoResult runEigenDemoToTrace(const EigenDemoSettings& settings, std::ostream& trace);

}  // namespace riemcon::expcli
