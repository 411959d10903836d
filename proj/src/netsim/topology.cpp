#include "riemcon/netsim/topology.hpp"

#include "riemcon/errors.hpp"

namespace riemcon::netsim {

TopologyKind parseTopologyKind(const std::string& name) {
  if (name == "full") return TopologyKind::Full;
  if (name == "hierarchical") return TopologyKind::Hierarchical;
  if (name == "ring") return TopologyKind::Ring;
  throw GraphError("unknown topology '" + name + "' (expected full, hierarchical or ring)");
}

std::string toString(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Full: return "full";
    case TopologyKind::Hierarchical: return "hierarchical";
    case TopologyKind::Ring: return "ring";
  }
  return "unknown";
}

std::vector<std::vector<int>> defaultTeams(int n_agents) {
  std::vector<std::vector<int>> teams(2);
  const int first = (n_agents + 1) / 2;
  for (int i = 0; i < n_agents; ++i) teams[i < first ? 0 : 1].push_back(i);
  if (teams[1].empty()) teams.pop_back();
  return teams;
}

consensus::CommGraph buildTopology(const Topology& topology) {
  const int n = topology.n_agents;
  if (n < 2) throw GraphError("a topology needs at least 2 agents");
  std::vector<consensus::Edge> edges;
  switch (topology.kind) {
    case TopologyKind::Full:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
      break;
    case TopologyKind::Ring:
      if (n < 3) throw GraphError("a ring needs at least 3 agents");
      for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
      break;
    case TopologyKind::Hierarchical: {
      const auto teams = topology.teams.empty() ? defaultTeams(n) : topology.teams;
      std::vector<int> seen(n, 0);
      std::vector<int> leaders;
      for (const auto& team : teams) {
        if (team.empty()) throw GraphError("hierarchical topology has an empty team");
        for (int m : team) {
          if (m < 0 || m >= n) throw GraphError("team member out of range");
          if (seen[m]++) throw GraphError("agent " + std::to_string(m) + " is in two teams");
        }
        leaders.push_back(team.front());
        for (std::size_t k = 1; k < team.size(); ++k) edges.push_back({team.front(), team[k]});
      }
      for (int i = 0; i < n; ++i)
        if (!seen[i]) throw GraphError("agent " + std::to_string(i) + " belongs to no team");
      for (std::size_t a = 0; a < leaders.size(); ++a)
        for (std::size_t b = a + 1; b < leaders.size(); ++b)
          edges.push_back({leaders[a], leaders[b]});
      break;
    }
  }
  return consensus::CommGraph(n, edges);
}

}  // namespace riemcon::netsim
