#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace riemcon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or lengths do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A logarithm was requested outside the injectivity radius (antipodal
/// rotation on SE(3), antipodal point on the circle).
class CutLocusError : public Error {
 public:
  using Error::Error;
};

/// A point is off its manifold or a tangent vector is outside the tangent
/// space at its base point.
class ManifoldConstraintError : public Error {
 public:
  using Error::Error;
};

class MalformedTwistError : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

class WireFormatError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Input data admits no unique answer (e.g. a repeated leading eigenvalue).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Carries every validation failure found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration:";
    for (const auto& p : problems) out += "\n  - " + p;
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace riemcon
