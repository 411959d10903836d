#include "riemcon/netsim/network.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

#include "riemcon/errors.hpp"

namespace riemcon::netsim {

namespace {

std::pair<int, int> key(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

}  // namespace

std::string toString(MessageKind kind) {
  switch (kind) {
    case MessageKind::Map: return "map";
    case MessageKind::Plan: return "plan";
    case MessageKind::Ledger: return "ledger";
    case MessageKind::Pose: return "pose";
  }
  return "unknown";
}

void LinkSchedule::addOutage(int i, int j, int down_from, int up_at) {
  if (i == j) throw GraphError("outage on a self loop");
  if (down_from < 0 || up_at <= down_from)
    throw GraphError("outage interval must satisfy 0 <= down_from < up_at");
  auto& list = outages_[key(i, j)];
  if (!list.empty() && down_from < list.back().second)
    throw GraphError("outage intervals of an edge must be disjoint and in order");
  list.push_back({down_from, up_at});
}

bool LinkSchedule::isUp(int i, int j, int tick) const {
  const auto it = outages_.find(key(i, j));
  if (it == outages_.end()) return true;
  for (auto [from, to] : it->second)
    if (tick >= from && tick < to) return false;
  return true;
}

void LinkSchedule::checkAgainst(const consensus::CommGraph& graph) const {
  for (const auto& [edge, list] : outages_)
    if (!graph.hasEdge(edge.first, edge.second))
      throw GraphError("outage scheduled on non-edge (" + std::to_string(edge.first) + ", " +
                       std::to_string(edge.second) + ")");
}

BandwidthLedger::BandwidthLedger(int n_agents) : tx_(n_agents, 0), rx_(n_agents, 0) {}

void BandwidthLedger::addTx(int agent, int tick, std::size_t bytes) {
  tx_.at(agent) += bytes;
  auto& d = deltas_[tick];
  if (d.empty()) d.assign(tx_.size(), {0, 0});
  d[agent].first += bytes;
}

void BandwidthLedger::addRx(int agent, int tick, std::size_t bytes) {
  rx_.at(agent) += bytes;
  auto& d = deltas_[tick];
  if (d.empty()) d.assign(tx_.size(), {0, 0});
  d[agent].second += bytes;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> BandwidthLedger::deltasAt(int tick) const {
  const auto it = deltas_.find(tick);
  if (it == deltas_.end()) return std::vector<std::pair<std::uint64_t, std::uint64_t>>(tx_.size());
  return it->second;
}

Network::Network(consensus::CommGraph graph, LinkSchedule schedule, int delay_ticks)
    : graph_(std::move(graph)),
      schedule_(std::move(schedule)),
      delay_(delay_ticks),
      ledger_(graph_.size()) {
  if (delay_ticks < 0) throw GraphError("link delay must be nonnegative");
  schedule_.checkAgainst(graph_);
}

bool Network::linkUp(int i, int j, int tick) const {
  return graph_.hasEdge(i, j) && schedule_.isUp(i, j, tick);
}

std::vector<int> Network::liveNeighbors(int agent, int tick) const {
  std::vector<int> out;
  for (int j : graph_.neighbors(agent))
    if (schedule_.isUp(agent, j, tick)) out.push_back(j);
  return out;
}

bool Network::send(int src, int dst, MessageKind kind, Bytes payload, int tick) {
  if (!graph_.hasEdge(src, dst))
    throw GraphError("no link between " + std::to_string(src) + " and " + std::to_string(dst));
  if (!schedule_.isUp(src, dst, tick)) return false;
  const std::size_t n = payload.size();
  ledger_.addTx(src, tick, n);
  log_.push_back({tick, src, dst, kind, n});
  queue_.push_back({Envelope{src, dst, kind, std::move(payload), tick}, next_seq_++});
  return true;
}

int Network::broadcast(int src, MessageKind kind, const Bytes& payload, int tick) {
  int sent = 0;
  for (int j : graph_.neighbors(src))
    if (send(src, j, kind, payload, tick)) ++sent;
  return sent;
}

std::vector<std::vector<Envelope>> Network::deliver(int tick) {
  std::vector<Queued> due;
  std::vector<Queued> keep;
  for (auto& q : queue_) {
    if (q.env.sent_tick + delay_ <= tick)
      due.push_back(std::move(q));
    else
      keep.push_back(std::move(q));
  }
  queue_ = std::move(keep);
  std::sort(due.begin(), due.end(), [](const Queued& a, const Queued& b) {
    return std::tie(a.env.sent_tick, a.env.src, a.env.dst, a.seq) <
           std::tie(b.env.sent_tick, b.env.src, b.env.dst, b.seq);
  });
  std::vector<std::vector<Envelope>> out(graph_.size());
  for (auto& q : due) {
    ledger_.addRx(q.env.dst, tick, q.env.payload.size());
    out[q.env.dst].push_back(std::move(q.env));
  }
  return out;
}

void Network::writeLog(std::ostream& out) const { writeLogEntries(out, log_); }

void writeLogEntries(std::ostream& out, const std::vector<LogEntry>& entries) {
  for (const auto& e : entries)
    out << "{\"tick\":" << e.tick << ",\"src\":" << e.src << ",\"dst\":" << e.dst
        << ",\"kind\":\"" << toString(e.kind) << "\",\"bytes\":" << e.bytes << "}\n";
}

}  // namespace riemcon::netsim
