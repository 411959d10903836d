#pragma once

#include <string>
#include <vector>

#include "riemcon/consensus/graph.hpp"

namespace riemcon::netsim {

enum class TopologyKind { Full, Hierarchical, Ring };

TopologyKind parseTopologyKind(const std::string& name);
std::string toString(TopologyKind kind);

struct Topology {
  TopologyKind kind = TopologyKind::Full;
  int n_agents = 0;
  /// Hierarchical only: a partition of the agents into teams. The first
  /// member of each team is its leader. Empty means two contiguous halves.
  std::vector<std::vector<int>> teams;
};

/// Two teams made of the first ceil(n/2) agents and the rest.
std::vector<std::vector<int>> defaultTeams(int n_agents);

/// Full: every pair. Ring: i <-> i+1 mod n (n >= 3). Hierarchical: each
/// member links to its team leader and the leaders form a clique. Weights
/// are Metropolis-Hastings. Throws GraphError on invalid parameters.
consensus::CommGraph buildTopology(const Topology& topology);

}  // namespace riemcon::netsim
