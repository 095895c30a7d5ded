#pragma once

#include <stdexcept>
#include <string>

namespace fracldg {

/// Invalid user-supplied parameters (bad option values, out-of-range s, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that breaks a structural invariant: degenerate or non-conforming
/// meshes, malformed files, singular local blocks.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (factorization breakdown, iteration budget).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracldg
