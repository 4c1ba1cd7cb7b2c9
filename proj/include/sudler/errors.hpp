#pragma once

#include <stdexcept>
#include <string>

namespace sudler {

/// Malformed alpha-spec string or CLI argument.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An index or integer argument lies outside the domain of an operation
/// (table too short, t beyond the Ostrowski validity range, ...).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The certified precision of an input cannot support the requested
/// computation.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation exceeded the desk bound on q_n.
class DeskBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sudler
