#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "riemcon/mapping/logodds.hpp"
#include "riemcon/netsim/topology.hpp"
#include "riemcon/planner/params.hpp"
#include "riemcon/world/sensor.hpp"

namespace riemcon::expcli {

enum class PlanningMode { Collaborative, Egocentric, Frontier };

PlanningMode parsePlanningMode(const std::string& name);
std::string toString(PlanningMode mode);

struct Outage {
  int i = 0;
  int j = 0;
  int from = 0;  ///< first tick the link is down
  int to = 0;    ///< first tick the link is back up
};

struct MappingParams {
  double eps_m = 0.1;
  double alpha_scale = 1.0;  ///< alpha_m(k) = alpha_scale / (k + 1)
  int t_pub = 5;             ///< ticks between map publications
  int t_int = 5;             ///< ticks between map consensus steps
  bool normalize_evidence = true;
  mapping::InverseModelParams inverse_model;
};

/// Everything a scenario run needs. Defaults are the full-scale parameter
/// set; the planner's metric sizes are in meters and usually overridden for
/// small worlds.
struct ScenarioConfig {
  std::filesystem::path world;
  int n_robots = 3;
  std::vector<Eigen::Vector4d> starts;  ///< [x, y, z, yaw]; empty uses the world's
  netsim::TopologyKind topology = netsim::TopologyKind::Full;
  std::vector<std::vector<int>> teams;
  PlanningMode mode = PlanningMode::Collaborative;
  planner::PlannerParams planner;
  int t_pub_p = 1;  ///< ticks between ledger broadcasts
  MappingParams mapping;
  world::SensorParams sensor;
  std::vector<Outage> outages;
  int link_delay = 0;
  int ticks = 2000;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  int final_epoch_max_rounds = 10000;
  double final_epoch_tolerance = 1e-8;

  /// Planner parameters after the mode rules: egocentric forces
  /// eps_p = gamma_q = 0 and frontier forces k_p = 0.
  planner::PlannerParams effectivePlanner() const;
  /// Human-readable notes for every value the mode rules overrode.
  std::vector<std::string> modeOverrides() const;

  /// Every problem found, including an unreadable world file. Empty when
  /// the configuration is runnable.
  std::vector<std::string> problems() const;
  /// Throws ConfigError carrying problems() when it is nonempty.
  void validate() const;
};

/// Reads a configuration from JSON. Relative paths are resolved against
/// base_dir. Unknown keys and wrongly typed values are reported together in
/// one ConfigError.
ScenarioConfig parseScenarioConfig(const nlohmann::json& j, const std::filesystem::path& base_dir);
ScenarioConfig loadScenarioConfig(const std::filesystem::path& path);

/// Eigenvector demo settings from the command line.
struct EigenDemoSettings {
  int points = 200;
  std::uint64_t seed = 0;
  double split = 0.5;
  double epsilon = 0.25;
  double alpha_scale = 2.0;
  int iterations = 20000;

  /// Rejects epsilon outside (0, 2/L) with L = 4 on the circle, plus
  /// malformed sizes.
  std::vector<std::string> problems() const;
};

}  // namespace riemcon::expcli
