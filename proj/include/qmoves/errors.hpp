#pragma once

#include <stdexcept>
#include <string>

namespace qmoves {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArgumentError : Error {
  using Error::Error;
};

// A control value outside its admissible range. `field` names the offender.
struct BoundsError : ArgumentError {
  BoundsError(std::string field, const std::string& what)
      : ArgumentError(what), field(std::move(field)) {}
  std::string field;
};

struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double last_energy)
      : Error(what), last_energy(last_energy) {}
  double last_energy;
};

// Probability reached the periodic boundary; the spectral propagator would
// wrap it around to the other side.
struct EdgeLeakError : Error {
  EdgeLeakError(const std::string& what, double time, double mass)
      : Error(what), time(time), mass(mass) {}
  double time;
  double mass;
};

struct ParseError : Error {
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line(line) {}
  int line;
};

struct ValidationError : Error {
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field(std::move(field)) {}
  std::string field;
};

struct UnsupportedVersionError : Error {
  explicit UnsupportedVersionError(int version)
      : Error("unsupported version " + std::to_string(version)),
        version(version) {}
  int version;
};

struct NotFoundError : Error {
  using Error::Error;
};

struct ConflictError : Error {
  using Error::Error;
};

struct ProgressionError : Error {
  ProgressionError(const std::string& what, std::string missing)
      : Error(what), missing_prerequisite(std::move(missing)) {}
  std::string missing_prerequisite;
};

}  // namespace qmoves
