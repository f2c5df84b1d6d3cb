#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "harmgram/encoding.hpp"

namespace harmgram {

// Ordered pattern of n chord tokens (n >= 1).
struct NGramType {
  std::vector<Csdc> members;

  int n() const { return static_cast<int>(members.size()); }
  std::string str() const;  // members joined by " -> "

  auto operator<=>(const NGramType&) const = default;
};

inline NGramType bigram(Csdc a, Csdc b) { return NGramType{{a, b}}; }

// Per-skip token counts for one bigram type: counts[t] = tokens whose
// members have exactly t intervening events.
struct SkipCountVector {
  NGramType type;
  std::vector<std::uint64_t> counts;  // indexed t = 0..t_max

  int t_max() const { return static_cast<int>(counts.size()) - 1; }
  std::uint64_t total() const;
};

struct CountTable {
  int n = 0;
  int skip_budget = 0;  // 0 = contiguous
  std::map<NGramType, std::uint64_t> counts;

  std::uint64_t total() const;
};

// ---------------------------------------------------------------------------
// Counting kernels. All counting is per movement (tokens never span two
// movements) with an associative merge, so results are identical for any
// worker count.
// ---------------------------------------------------------------------------

// Contiguous n-gram tokens; per movement the token total is max(k-n+1, 0).
CountTable count_contiguous(const EncodedCorpus& corpus, int n, int threads = 0);

// Tokens whose members fit a total skip budget of t intervening events
// (summed across gaps). t = 0 degenerates to count_contiguous.
CountTable count_skipgrams(const EncodedCorpus& corpus, int n, int t, int threads = 0);

// C(k, n) in exact integer arithmetic; n > k yields 0.
std::uint64_t combination_bound(std::uint64_t k, std::uint64_t n);

// Emits every index tuple i1 < ... < in over one sequence whose total skip
// budget sum_j (i_{j+1} - i_j - 1) is <= t. The callback receives the type
// and the index tuple.
template <typename Callback>
void enumerate_skipgrams(std::span<const Csdc> sequence, int n, int t, Callback&& emit);

// Exact-skip bigram count vectors for t = 0..t_max over the whole corpus.
std::map<NGramType, SkipCountVector> skip_count_vectors(const EncodedCorpus& corpus,
                                                        int t_max, int threads = 0);

// ---------------------------------------------------------------------------
// CSV export: "chord1,...,chordn,count" sorted by count descending then
// canonical type order, or "type,t0,...,tN" for skip vectors.
// ---------------------------------------------------------------------------

void write_count_table_csv(std::ostream& out, const CountTable& table);
void write_skip_vectors_csv(std::ostream& out,
                            const std::map<NGramType, SkipCountVector>& vectors);

// ---------------------------------------------------------------------------

namespace detail {

template <typename Callback>
void enumerate_tuples(std::span<const Csdc> sequence, int n, int budget,
                      std::vector<std::size_t>& indices, Callback& emit) {
  const int depth = static_cast<int>(indices.size());
  if (depth == n) {
    NGramType type;
    type.members.reserve(static_cast<std::size_t>(n));
    for (std::size_t idx : indices) type.members.push_back(sequence[idx]);
    emit(type, std::span<const std::size_t>(indices));
    return;
  }
  const std::size_t k = sequence.size();
  // Remaining members still need depth slots after this one.
  const std::size_t tail = static_cast<std::size_t>(n - depth - 1);
  std::size_t lo = indices.empty() ? 0 : indices.back() + 1;
  for (std::size_t i = lo; i + tail < k; ++i) {
    int gap = indices.empty() ? 0 : static_cast<int>(i - indices.back() - 1);
    if (gap > budget) break;  // gaps only grow as i advances
    indices.push_back(i);
    enumerate_tuples(sequence, n, budget - gap, indices, emit);
    indices.pop_back();
  }
}

}  // namespace detail

template <typename Callback>
void enumerate_skipgrams(std::span<const Csdc> sequence, int n, int t, Callback&& emit) {
  if (n < 2) throw ArgumentError("skip-gram enumeration requires n >= 2");
  if (t < 0) throw ArgumentError("skip budget must be >= 0");
  std::vector<std::size_t> indices;
  indices.reserve(static_cast<std::size_t>(n));
  detail::enumerate_tuples(sequence, n, t, indices, emit);
}

}  // namespace harmgram
