#pragma once

#include <stdexcept>
#include <string>

namespace polya {

// Malformed urn description (dimensions, signs, probability mass).
class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation that needs a balanced urn was handed an unbalanced one.
class NotBalanced : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A precondition on the arguments of an operation does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical breakdown: ill-conditioned bases, inconsistent ranks,
// identities violated beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The simulated process left the tenable region.
class TenabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact enumeration would exceed the configured state cap.
class StateSpaceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polya
