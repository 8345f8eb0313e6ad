#pragma once

#include <stdexcept>
#include <string>

namespace rigorbench {

// Malformed input, failed validation, bad configuration. CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A statistical precondition does not hold (too few algorithms, bad
// degrees of freedom, out-of-domain argument). CLI exit code 2.
class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rigorbench
