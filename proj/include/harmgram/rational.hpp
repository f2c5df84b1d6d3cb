#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

#include "harmgram/errors.hpp"

namespace harmgram {

// Exact time arithmetic for onsets and durations. Comparing unique onset
// times with floats invites equality bugs; rationals make "same onset"
// well defined.
using Rat = boost::rational<std::int64_t>;

inline Rat make_rat(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  return Rat(num, den);
}

inline std::string rat_str(const Rat& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double rat_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace harmgram
