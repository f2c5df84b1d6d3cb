// Independent brute-force oracles used to cross-check the library. These are
// deliberately written with different data structures and algorithms than
// the implementations they verify.

#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "harmgram/corpus.hpp"
#include "harmgram/encoding.hpp"
#include "harmgram/ngram.hpp"
#include "harmgram/reduction.hpp"

namespace harmgram::oracle {

// Slice membership by direct interval containment: for each distinct onset,
// scan every note and test onset <= o < onset + duration.
struct SliceSketch {
  Rat onset;
  std::vector<std::pair<int, int>> sounding;
};
std::vector<SliceSketch> slices_by_containment(const Movement& movement);

// All n-subsets of positions via bitmask enumeration, filtered by the total
// skip budget. Only usable for short sequences.
std::map<NGramType, std::uint64_t> skipgrams_by_bitmask(const std::vector<Csdc>& seq,
                                                        int n, int t);
std::uint64_t skipgram_token_count(const std::vector<Csdc>& seq, int n, int t);

// Least-squares cubic through exact rational normal equations.
struct RationalCubic {
  double b3, b2, b1, b0;
};
RationalCubic cubic_by_rational_normal_equations(const std::vector<std::uint64_t>& counts);

// Two-sided Fisher p by exact rational hypergeometric enumeration.
double fisher_by_rational_enumeration(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                      std::uint64_t d);

// Step-by-step reduction simulator over a plain index vector.
std::vector<ReductionLink> reduce_by_simulation(const std::vector<double>& forces);

}  // namespace harmgram::oracle
