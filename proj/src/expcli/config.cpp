#include "riemcon/expcli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "riemcon/consensus/schedule.hpp"
#include "riemcon/errors.hpp"
#include "riemcon/mapping/occupancy.hpp"
#include "riemcon/world/world.hpp"

namespace riemcon::expcli {

using nlohmann::json;

PlanningMode parsePlanningMode(const std::string& name) {
  if (name == "collaborative") return PlanningMode::Collaborative;
  if (name == "egocentric") return PlanningMode::Egocentric;
  if (name == "frontier") return PlanningMode::Frontier;
  throw ConfigError({"unknown planning mode '" + name + "'"});
}

std::string toString(PlanningMode mode) {
  switch (mode) {
    case PlanningMode::Collaborative: return "collaborative";
    case PlanningMode::Egocentric: return "egocentric";
    case PlanningMode::Frontier: return "frontier";
  }
  return "unknown";
}

namespace {

/// Reads fields of one JSON object, recording type errors and unknown keys
/// instead of stopping at the first.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string where, std::vector<std::string>& problems)
      : obj_(obj), where_(std::move(where)), problems_(problems) {
    if (!obj_.is_object()) problems_.push_back(where_ + " must be an object");
  }

  ~ObjectReader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) problems_.push_back("unknown key " + path(key));
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.is_object() && obj_.contains(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer()) {
        problems_.push_back(path(key) + " must be an integer");
        return;
      }
    }
    try {
      out = v.get<T>();
    } catch (const json::exception&) {
      problems_.push_back(path(key) + " has the wrong type");
    }
  }

  const json& at(const std::string& key) const { return obj_.at(key); }
  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const json& obj_;
  std::string where_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void readPlanner(const json& j, planner::PlannerParams& p, int& t_pub_p,
                 std::vector<std::string>& problems) {
  ObjectReader r(j, "planner", problems);
  r.get("eps_p", p.eps_p);
  r.get("alpha_p", p.alpha_scale);
  r.get("gamma_c", p.gamma_c);
  r.get("gamma_q", p.gamma_q);
  r.get("d_q", p.d_q);
  r.get("xi_max", p.xi_max);
  r.get("T", p.horizon);
  r.get("k_p", p.k_p);
  r.get("thresh_p", p.thresh_p);
  r.get("t_pub_p", t_pub_p);
  r.get("planar", p.planar);
  r.get("literal_info_term", p.literal_info_term);
  if (r.has("gamma")) {
    std::vector<double> g;
    r.get("gamma", g);
    if (g.size() == 6)
      p.gamma = manifold::MetricWeights(Eigen::Map<const Eigen::Matrix<double, 6, 1>>(g.data()));
    else
      problems.push_back("planner.gamma must list 6 weights");
  }
}

void readMapping(const json& j, MappingParams& m, std::vector<std::string>& problems) {
  ObjectReader r(j, "mapping", problems);
  r.get("eps_m", m.eps_m);
  r.get("alpha_m", m.alpha_scale);
  r.get("t_pub_m", m.t_pub);
  r.get("t_int_m", m.t_int);
  r.get("normalize_evidence", m.normalize_evidence);
  r.get("hit_confidence", m.inverse_model.hit_confidence);
  r.get("free_confidence", m.inverse_model.free_confidence);
}

void readSensor(const json& j, world::SensorParams& s, std::vector<std::string>& problems) {
  ObjectReader r(j, "sensor", problems);
  r.get("horizontal_fov", s.horizontal_fov);
  r.get("vertical_fov", s.vertical_fov);
  r.get("rays_h", s.rays_h);
  r.get("rays_v", s.rays_v);
  r.get("max_range", s.max_range);
  r.get("range_noise_sigma", s.range_noise_sigma);
  r.get("label_flip_prob", s.label_flip_prob);
}

}  // namespace

ScenarioConfig parseScenarioConfig(const json& j, const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  std::vector<std::string> problems;
  {
    ObjectReader r(j, "config", problems);
    std::string world, out, topology, mode;
    r.get("world", world);
    if (!world.empty()) c.world = base_dir / world;
    r.get("n_robots", c.n_robots);
    if (r.has("starts")) {
      std::vector<std::vector<double>> starts;
      r.get("starts", starts);
      for (const auto& s : starts) {
        if (s.size() != 4) {
          problems.push_back("config.starts entries must be [x, y, z, yaw]");
          continue;
        }
        c.starts.emplace_back(s[0], s[1], s[2], s[3]);
      }
    }
    r.get("topology", topology);
    if (!topology.empty()) {
      try {
        c.topology = netsim::parseTopologyKind(topology);
      } catch (const Error& e) {
        problems.push_back(std::string("config.topology: ") + e.what());
      }
    }
    r.get("teams", c.teams);
    r.get("mode", mode);
    if (!mode.empty()) {
      try {
        c.mode = parsePlanningMode(mode);
      } catch (const ConfigError& e) {
        problems.push_back("config.mode: " + e.problems().front());
      }
    }
    if (r.has("planner")) readPlanner(r.at("planner"), c.planner, c.t_pub_p, problems);
    if (r.has("mapping")) readMapping(r.at("mapping"), c.mapping, problems);
    if (r.has("sensor")) readSensor(r.at("sensor"), c.sensor, problems);
    if (r.has("outages")) {
      if (!r.at("outages").is_array()) problems.push_back("config.outages must be a list");
      else
        for (const auto& o : r.at("outages")) {
          ObjectReader orr(o, "outage", problems);
          Outage out_entry;
          orr.get("i", out_entry.i);
          orr.get("j", out_entry.j);
          orr.get("from", out_entry.from);
          orr.get("to", out_entry.to);
          c.outages.push_back(out_entry);
        }
    }
    r.get("link_delay", c.link_delay);
    r.get("ticks", c.ticks);
    r.get("seed", c.seed);
    r.get("output_dir", out);
    if (!out.empty()) c.output_dir = base_dir / out;
    r.get("final_epoch_max_rounds", c.final_epoch_max_rounds);
    r.get("final_epoch_tolerance", c.final_epoch_tolerance);
  }
  if (!problems.empty()) throw ConfigError(problems);
  return c;
}

ScenarioConfig loadScenarioConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path.string()});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return parseScenarioConfig(j, path.parent_path());
}

planner::PlannerParams ScenarioConfig::effectivePlanner() const {
  planner::PlannerParams p = planner;
  if (mode == PlanningMode::Egocentric) {
    p.eps_p = 0.0;
    p.gamma_q = 0.0;
  } else if (mode == PlanningMode::Frontier) {
    p.k_p = 0;
  }
  return p;
}

std::vector<std::string> ScenarioConfig::modeOverrides() const {
  std::vector<std::string> out;
  if (mode == PlanningMode::Egocentric) {
    if (planner.eps_p != 0.0) out.push_back("egocentric mode sets eps_p to 0");
    if (planner.gamma_q != 0.0) out.push_back("egocentric mode sets gamma_q to 0");
  } else if (mode == PlanningMode::Frontier && planner.k_p != 0) {
    out.push_back("frontier mode sets k_p to 0");
  }
  return out;
}

std::vector<std::string> ScenarioConfig::problems() const {
  std::vector<std::string> out;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) out.push_back(msg);
  };
  check(n_robots >= 1, "n_robots must be at least 1");
  check(ticks >= 0, "ticks must be nonnegative");
  check(link_delay >= 0, "link_delay must be nonnegative");
  check(t_pub_p >= 1, "planner.t_pub_p must be at least 1");
  check(mapping.t_pub >= 1, "mapping.t_pub_m must be at least 1");
  check(mapping.t_int >= 1, "mapping.t_int_m must be at least 1");
  check(final_epoch_max_rounds >= 0, "final_epoch_max_rounds must be nonnegative");
  check(final_epoch_tolerance > 0.0, "final_epoch_tolerance must be positive");
  // Flat log-odds space: rho = 0, L = 4, so the consensus step must stay below 1/2.
  check(mapping.eps_m > 0.0 && mapping.eps_m < 2.0 / consensus::smoothnessConstant(0.0),
        "mapping.eps_m must lie in (0, 2/L) = (0, 0.5)");
  check(mapping.alpha_scale > 0.0, "mapping.alpha_m must be positive");
  // The SE(3) bound 2/(4(1 + rho)) is tighter still; the flat bound is a necessary condition.
  check(planner.eps_p >= 0.0 && planner.eps_p < 2.0 / consensus::smoothnessConstant(0.0),
        "planner.eps_p must lie in [0, 0.5)");
  try {
    planner.validate();
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) out.push_back("planner: " + p);
  }
  try {
    sensor.validate();
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) out.push_back("sensor: " + p);
  }

  std::optional<world::GroundTruthWorld> w;
  if (world.empty()) {
    out.push_back("world file is not set");
  } else {
    try {
      w = world::loadWorld(world);
    } catch (const Error& e) {
      out.push_back(std::string("world: ") + e.what());
    }
  }
  if (w) {
    try {
      mapping.inverse_model.validate(w->classesPlusOne());
    } catch (const ConfigError& e) {
      for (const auto& p : e.problems()) out.push_back("mapping: " + p);
    }
    const auto& s = starts.empty() ? w->starts() : starts;
    if (static_cast<int>(s.size()) < n_robots)
      out.push_back("need " + std::to_string(n_robots) + " start poses, have " +
                    std::to_string(s.size()));
    const auto& g = w->geometry();
    for (std::size_t k = 0; k < s.size() && static_cast<int>(k) < n_robots; ++k) {
      const Eigen::Vector3i cell = g.cellOf(s[k].head<3>());
      if (!g.contains(cell)) {
        out.push_back("start " + std::to_string(k) + " lies outside the world");
        continue;
      }
      bool drivable = false, blocked = false;
      for (int z = 0; z < g.dims.z(); ++z) {
        const int label = w->label(cell.x(), cell.y(), z);
        if (label == 0) continue;
        const bool trav = std::find(w->traversable().begin(), w->traversable().end(), label) !=
                          w->traversable().end();
        (trav ? drivable : blocked) = true;
      }
      if (!drivable || blocked)
        out.push_back("start " + std::to_string(k) + " is not on a traversable column");
      if (w->label(g.index(cell)) != 0)
        out.push_back("start " + std::to_string(k) + " sensor position is inside an occupied cell");
    }
  }
  if (n_robots >= 1) {
    std::optional<consensus::CommGraph> graph;
    try {
      if (n_robots == 1)
        graph.emplace(1, std::vector<consensus::Edge>{});
      else
        graph = netsim::buildTopology({topology, n_robots, teams});
    } catch (const Error& e) {
      out.push_back(std::string("topology: ") + e.what());
    }
    if (graph) {
      netsim::LinkSchedule schedule;
      for (const auto& o : outages) {
        try {
          if (o.i < 0 || o.j < 0 || o.i >= n_robots || o.j >= n_robots)
            throw GraphError("outage endpoint out of range");
          schedule.addOutage(o.i, o.j, o.from, o.to);
        } catch (const Error& e) {
          out.push_back(std::string("outage: ") + e.what());
        }
      }
      try {
        schedule.checkAgainst(*graph);
      } catch (const Error& e) {
        out.push_back(std::string("outage: ") + e.what());
      }
    }
  }
  return out;
}

void ScenarioConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError(std::move(p));
}

std::vector<std::string> EigenDemoSettings::problems() const {
  std::vector<std::string> out;
  if (points < 4) out.push_back("points must be at least 4");
  if (!(split > 0.0 && split < 1.0)) out.push_back("split must lie in (0, 1)");
  if (iterations < 1) out.push_back("iterations must be at least 1");
  if (!(alpha_scale >= 0.0)) out.push_back("alpha scale must be nonnegative");
  try {
    consensus::validateSchedule(consensus::StepSchedule(epsilon, alpha_scale), 0.0);
  } catch (const Error& e) {
    out.push_back(e.what());
  }
  return out;
}

}  // namespace riemcon::expcli
