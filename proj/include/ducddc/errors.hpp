#pragma once

#include <stdexcept>
#include <string>

namespace ducddc {

/// Raised when a caller breaks an operation's precondition (width mismatch,
/// value out of range, MAC schedule overrun).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised for invalid user-supplied configuration: carrier out of band,
/// Nyquist violations, bad filter band edges, malformed files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ducddc
