#pragma once

#include <stdexcept>
#include <string>

namespace heislab {

// Precondition broken by the caller (law mismatch, p <= q, non-prime, ...).
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input data that does not describe a valid object (off-constraint tuple,
// bad config value, unparsable number).
class malformed_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not reach its stated accuracy.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heislab
