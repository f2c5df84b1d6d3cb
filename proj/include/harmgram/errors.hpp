#pragma once

#include <stdexcept>
#include <string>

namespace harmgram {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file (message carries file name / line number).
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid input that violates a corpus invariant
// (key-coverage gaps, overlapping non-pivot segments, ...).
struct ValidationError : Error {
  using Error::Error;
};

// A slice with more than three distinct non-bass scale degrees cannot be
// represented as a chord token.
struct CapacityError : Error {
  using Error::Error;
};

// Out-of-range or inconsistent operation arguments.
struct ArgumentError : Error {
  using Error::Error;
};

// A statistic that is undefined for the given inputs (empty contingency
// table, zero conditional denominator, underdetermined fit).
struct StatError : Error {
  using Error::Error;
};

}  // namespace harmgram
