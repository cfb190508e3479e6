#pragma once

#include <stdexcept>
#include <string>

namespace recip {

// Bad user-supplied data: malformed files, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A policy broke the protocol contract (e.g. selected an index >= n).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An operation was invoked on an object in the wrong lifecycle state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Internal invariant violated at run time (yardstick dominance, etc.).
class AssertionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace recip
