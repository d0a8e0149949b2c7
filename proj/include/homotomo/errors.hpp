#pragma once

#include <stdexcept>
#include <string>

namespace homotomo {

/// Term/degree budget exceeded, tabulation too large, or similar.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: non-convergence, overflow, truncation deficit too large.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Detector efficiency too low for unbiased reconstruction of the requested class.
class InsufficientEfficiency : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed configuration or descriptor.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace homotomo
