#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "riemcon/consensus/graph.hpp"

namespace riemcon::netsim {

enum class MessageKind { Map, Plan, Ledger, Pose };

std::string toString(MessageKind kind);

using Bytes = std::vector<std::uint8_t>;

struct Envelope {
  int src = 0;
  int dst = 0;
  MessageKind kind = MessageKind::Map;
  Bytes payload;
  int sent_tick = 0;
};

/// Per-edge outage intervals [down_from, up_at). Intervals of one edge must
/// be disjoint and ordered.
class LinkSchedule {
 public:
  void addOutage(int i, int j, int down_from, int up_at);
  bool isUp(int i, int j, int tick) const;
  /// Throws GraphError if an outage refers to a pair that is not an edge.
  void checkAgainst(const consensus::CommGraph& graph) const;
  bool empty() const { return outages_.empty(); }

 private:
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> outages_;
};

struct LogEntry {
  int tick = 0;
  int src = 0;
  int dst = 0;
  MessageKind kind = MessageKind::Map;
  std::size_t bytes = 0;
};

/// JSON lines {"tick","src","dst","kind","bytes"}, one per entry.
void writeLogEntries(std::ostream& out, const std::vector<LogEntry>& entries);

/// Cumulative per-agent byte counters with per-tick deltas.
class BandwidthLedger {
 public:
  explicit BandwidthLedger(int n_agents = 0);

  void addTx(int agent, int tick, std::size_t bytes);
  void addRx(int agent, int tick, std::size_t bytes);

  std::uint64_t tx(int agent) const { return tx_.at(agent); }
  std::uint64_t rx(int agent) const { return rx_.at(agent); }
  /// Deltas recorded at one tick, (tx, rx) per agent.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> deltasAt(int tick) const;

 private:
  std::vector<std::uint64_t> tx_;
  std::vector<std::uint64_t> rx_;
  std::map<int, std::vector<std::pair<std::uint64_t, std::uint64_t>>> deltas_;
};

/// Deterministic one-hop message passing over a communication graph. Link
/// outages gate sends only; envelopes already queued still arrive after
/// the fixed delay.
class Network {
 public:
  explicit Network(consensus::CommGraph graph, LinkSchedule schedule = {}, int delay_ticks = 0);

  const consensus::CommGraph& graph() const { return graph_; }
  int delay() const { return delay_; }

  bool linkUp(int i, int j, int tick) const;
  std::vector<int> liveNeighbors(int agent, int tick) const;

  /// Unicast along one edge. Returns false, and sends nothing, when the
  /// link is down. Throws GraphError if {src, dst} is not an edge.
  bool send(int src, int dst, MessageKind kind, Bytes payload, int tick);

  /// One envelope per live incident edge; returns how many were queued.
  int broadcast(int src, MessageKind kind, const Bytes& payload, int tick);

  /// Envelopes with sent_tick + delay <= tick, grouped by destination and
  /// ordered by (sent_tick, src, dst, send order).
  std::vector<std::vector<Envelope>> deliver(int tick);

  std::size_t inFlight() const { return queue_.size(); }

  const BandwidthLedger& bandwidth() const { return ledger_; }
  std::uint64_t txBytes(int agent) const { return ledger_.tx(agent); }
  std::uint64_t rxBytes(int agent) const { return ledger_.rx(agent); }

  /// One entry per envelope sent.
  const std::vector<LogEntry>& log() const { return log_; }
  /// JSON lines {"tick","src","dst","kind","bytes"}.
  void writeLog(std::ostream& out) const;

 private:
  struct Queued {
    Envelope env;
    std::uint64_t seq;
  };

  consensus::CommGraph graph_;
  LinkSchedule schedule_;
  int delay_;
  std::uint64_t next_seq_ = 0;
  std::vector<Queued> queue_;
  BandwidthLedger ledger_;
  std::vector<LogEntry> log_;
};

}  // namespace riemcon::netsim
