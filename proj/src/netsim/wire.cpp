#include "riemcon/netsim/wire.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "riemcon/errors.hpp"

namespace riemcon::netsim {

namespace {

constexpr double kQuaternionTolerance = 1e-6;

class Writer {
 public:
  explicit Writer(std::size_t reserve) { out_.reserve(reserve); }

  void magic(const char (&m)[5]) { out_.insert(out_.end(), m, m + 4); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { uint(v, 2); }
  void u32(std::uint32_t v) { uint(v, 4); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v), 8); }
  Bytes take() { return std::move(out_); }

 private:
  void uint(std::uint64_t v, int n) {
    for (int k = 0; k < n; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  Bytes out_;
};

class Reader {
 public:
  Reader(const Bytes& in, const char* what) : in_(in), what_(what) {}

  void magic(const char (&m)[5]) {
    need(4);
    if (std::memcmp(in_.data() + pos_, m, 4) != 0)
      throw WireFormatError(std::string(what_) + ": bad magic");
    pos_ += 4;
  }
  void version() {
    if (u16() != kWireVersion) throw WireFormatError(std::string(what_) + ": unsupported version");
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() { return static_cast<std::uint16_t>(uint(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  double f64() { return std::bit_cast<double>(uint(8)); }
  void finish() const {
    if (pos_ != in_.size()) throw WireFormatError(std::string(what_) + ": trailing bytes");
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw WireFormatError(std::string(what_) + ": truncated message");
  }
  std::uint64_t uint(int n) {
    need(n);
    std::uint64_t v = 0;
    for (int k = 0; k < n; ++k) v |= static_cast<std::uint64_t>(in_[pos_ + k]) << (8 * k);
    pos_ += n;
    return v;
  }

  const Bytes& in_;
  const char* what_;
  std::size_t pos_ = 0;
};

void writePose(Writer& w, const manifold::Pose& pose) {
  Eigen::Quaterniond q(pose.rotation());
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  w.f64(q.w());
  w.f64(q.x());
  w.f64(q.y());
  w.f64(q.z());
  for (int k = 0; k < 3; ++k) w.f64(pose.translation()(k));
}

manifold::Pose readPose(Reader& r) {
  const double qw = r.f64(), qx = r.f64(), qy = r.f64(), qz = r.f64();
  Eigen::Vector3d p;
  for (int k = 0; k < 3; ++k) p(k) = r.f64();
  Eigen::Quaterniond q(qw, qx, qy, qz);
  if (!std::isfinite(q.norm()) || std::abs(q.norm() - 1.0) > kQuaternionTolerance)
    throw WireFormatError("pose quaternion is not unit length");
  if (!p.allFinite()) throw WireFormatError("pose translation is not finite");
  q.normalize();
  return manifold::Pose(q.toRotationMatrix(), p);
}

}  // namespace

Bytes serializeMap(const MapMessage& message) {
  const int cp1 = message.classes_plus_one;
  if (cp1 < 2 || cp1 > 0xffff) throw DimensionError("map message needs 2 <= C+1 <= 65535");
  const int c = cp1 - 1;
  Writer w(kMapHeaderBytes + message.cells.size() * (4 + 8 * c));
  w.magic("RMAP");
  w.u16(kWireVersion);
  w.u16(static_cast<std::uint16_t>(cp1));
  w.u32(static_cast<std::uint32_t>(message.cells.size()));
  for (const auto& cell : message.cells) {
    if (cell.log_odds.size() != cp1)
      throw DimensionError("map cell " + std::to_string(cell.index) + " has " +
                           std::to_string(cell.log_odds.size()) + " log-odds, expected " +
                           std::to_string(cp1));
    if (cell.log_odds(0) != 0.0)
      throw WireFormatError("map cell " + std::to_string(cell.index) +
                            " has a nonzero free-class log-odds");
    w.u32(cell.index);
    for (int k = 1; k < cp1; ++k) w.f64(cell.log_odds(k));
  }
  return w.take();
}

MapMessage deserializeMap(const Bytes& bytes) {
  Reader r(bytes, "RMAP");
  r.magic("RMAP");
  r.version();
  MapMessage m;
  m.classes_plus_one = r.u16();
  if (m.classes_plus_one < 2) throw WireFormatError("RMAP: C+1 must be at least 2");
  const std::uint32_t count = r.u32();
  if (bytes.size() != kMapHeaderBytes + count * (4 + 8ull * (m.classes_plus_one - 1)))
    throw WireFormatError("RMAP: length does not match the cell count");
  m.cells.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    MapCell cell;
    cell.index = r.u32();
    cell.log_odds = Eigen::VectorXd::Zero(m.classes_plus_one);
    for (int k = 1; k < m.classes_plus_one; ++k) cell.log_odds(k) = r.f64();
    m.cells.push_back(std::move(cell));
  }
  r.finish();
  return m;
}

Bytes serializePlan(const std::vector<std::vector<manifold::Pose>>& rows) {
  if (rows.size() > 0xffff) throw DimensionError("plan has too many robots");
  const std::size_t t = rows.empty() ? 0 : rows.front().size();
  if (t > 0xffff) throw DimensionError("plan horizon is too long");
  for (const auto& row : rows)
    if (row.size() != t) throw DimensionError("plan rows must have equal length");
  Writer w(kPlanHeaderBytes + rows.size() * t * kPoseBytes);
  w.magic("RPLN");
  w.u16(kWireVersion);
  w.u16(static_cast<std::uint16_t>(rows.size()));
  w.u16(static_cast<std::uint16_t>(t));
  w.u16(0);
  for (const auto& row : rows)
    for (const auto& pose : row) writePose(w, pose);
  return w.take();
}

std::vector<std::vector<manifold::Pose>> deserializePlan(const Bytes& bytes) {
  Reader r(bytes, "RPLN");
  r.magic("RPLN");
  r.version();
  const int v = r.u16();
  const int t = r.u16();
  r.u16();
  if (bytes.size() != kPlanHeaderBytes + static_cast<std::size_t>(v) * t * kPoseBytes)
    throw WireFormatError("RPLN: length does not match |V| x T");
  std::vector<std::vector<manifold::Pose>> rows(v);
  for (auto& row : rows) {
    row.reserve(t);
    for (int k = 0; k < t; ++k) row.push_back(readPose(r));
  }
  r.finish();
  return rows;
}

Bytes serializeLedger(const std::vector<bool>& flags) {
  if (flags.size() > 0xffff) throw DimensionError("ledger has too many robots");
  Writer w(10 + flags.size());
  w.magic("RLDG");
  w.u16(kWireVersion);
  w.u16(static_cast<std::uint16_t>(flags.size()));
  w.u16(0);
  for (bool f : flags) w.u8(f ? 1 : 0);
  return w.take();
}

std::vector<bool> deserializeLedger(const Bytes& bytes) {
  Reader r(bytes, "RLDG");
  r.magic("RLDG");
  r.version();
  const int n = r.u16();
  r.u16();
  std::vector<bool> flags(n);
  for (int i = 0; i < n; ++i) {
    const std::uint8_t b = r.u8();
    if (b > 1) throw WireFormatError("RLDG: flag byte must be 0 or 1");
    flags[i] = b == 1;
  }
  r.finish();
  return flags;
}

Bytes serializePose(const manifold::Pose& pose) {
  Writer w(8 + kPoseBytes);
  w.magic("RPOS");
  w.u16(kWireVersion);
  w.u16(0);
  writePose(w, pose);
  return w.take();
}

manifold::Pose deserializePose(const Bytes& bytes) {
  Reader r(bytes, "RPOS");
  r.magic("RPOS");
  r.version();
  r.u16();
  auto pose = readPose(r);
  r.finish();
  return pose;
}

}  // namespace riemcon::netsim
