#pragma once

#include <stdexcept>
#include <string>

namespace bernoulli {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The free boundary is not admissible: r(theta) <= 0 somewhere, or the curve
// does not strictly enclose the fixed boundary.
class InfeasibleShape : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bernoulli
