#pragma once

/** Little-endian wire formats.
 *
 *   RMAP: 'RMAP' | version u16 | C+1 u16 | count u32 | count x (index u32, C x f64)
 *   RPLN: 'RPLN' | version u16 | |V| u16 | T u16 | reserved u16 | |V|*T x 7 f64
 *   RLDG: 'RLDG' | version u16 | n u16 | reserved u16 | n x u8
 *   RPOS: 'RPOS' | version u16 | reserved u16 | 7 x f64
 *
 * Poses are stored as a unit quaternion (w, x, y, z) followed by the
 * translation. The first log-odds entry of a map cell is always 0 and is not
 * transmitted.
 */

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "riemcon/manifold/se3.hpp"
#include "riemcon/netsim/network.hpp"

namespace riemcon::netsim {

inline constexpr std::uint16_t kWireVersion = 1;
inline constexpr std::size_t kMapHeaderBytes = 12;
inline constexpr std::size_t kPlanHeaderBytes = 12;
inline constexpr std::size_t kPoseBytes = 56;

struct MapCell {
  std::uint32_t index = 0;
  Eigen::VectorXd log_odds;  ///< length C+1, entry 0 is 0
};

struct MapMessage {
  int classes_plus_one = 0;
  std::vector<MapCell> cells;
};

/// Throws DimensionError if a cell vector has the wrong length, and
/// WireFormatError if its first entry is not 0.
Bytes serializeMap(const MapMessage& message);
MapMessage deserializeMap(const Bytes& bytes);

/// rows[v][t] is robot v's pose at step t; every row must have the same
/// length.
Bytes serializePlan(const std::vector<std::vector<manifold::Pose>>& rows);
/// Rejects quaternions whose norm is off by more than 1e-6.
std::vector<std::vector<manifold::Pose>> deserializePlan(const Bytes& bytes);

Bytes serializeLedger(const std::vector<bool>& flags);
std::vector<bool> deserializeLedger(const Bytes& bytes);

Bytes serializePose(const manifold::Pose& pose);
manifold::Pose deserializePose(const Bytes& bytes);

}  // namespace riemcon::netsim
