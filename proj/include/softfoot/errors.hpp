#pragma once

#include <stdexcept>
#include <string>

namespace softfoot {

// Malformed or schema-violating input files (exit code 2 in the CLI).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Impossible geometric construction, e.g. overlapping pulleys.
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite state during integration (exit code 3 in the CLI).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time, const std::string& coordinate)
      : std::runtime_error(what), time(time), coordinate(coordinate) {}

  double time = 0.0;
  std::string coordinate;
};

}  // namespace softfoot
