#pragma once

#include <stdexcept>
#include <string>

namespace fanrot {

/// A value violates one of its invariants (bad fan, det != 1, non-dyadic slope, ...).
class InvalidError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input text could not be parsed at all.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An algorithm left a state its termination argument rules out. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fanrot
