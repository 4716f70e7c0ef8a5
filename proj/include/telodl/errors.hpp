#pragma once

#include <stdexcept>
#include <string>

namespace telodl {

/// Bad user input: out-of-range parameters, malformed files, unknown names.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical contract was broken: singular system, non-ergodic chain,
/// negative conservation residue.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace telodl
