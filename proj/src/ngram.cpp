#include "harmgram/ngram.hpp"

#include <omp.h>

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include "harmgram/csv.hpp"
#include "harmgram/errors.hpp"

namespace harmgram {

std::string NGramType::str() const {
  std::string out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) out += " -> ";
    out += members[i].str();
  }
  return out;
}

std::uint64_t SkipCountVector::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

std::uint64_t CountTable::total() const {
  std::uint64_t sum = 0;
  for (const auto& [type, count] : counts) sum += count;
  return sum;
}

namespace {

int resolve_threads(int threads) { return threads <= 0 ? omp_get_max_threads() : threads; }

// Bigrams dominate the workload, so they get a packed-key fast path.
using PackedBigram = std::uint32_t;

PackedBigram pack_bigram(Csdc a, Csdc b) {
  return (static_cast<std::uint32_t>(a.packed()) << 16) | b.packed();
}

NGramType unpack_bigram(PackedBigram key) {
  return bigram(Csdc::from_packed_unchecked(static_cast<std::uint16_t>(key >> 16)),
                Csdc::from_packed_unchecked(static_cast<std::uint16_t>(key & 0xFFFF)));
}

// Counts one movement's bigram tokens with gap <= t into `local`.
void count_bigrams_budget(const std::vector<Csdc>& seq, int t,
                          std::unordered_map<PackedBigram, std::uint64_t>& local) {
  const std::size_t k = seq.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j_end = std::min(k, i + 2 + static_cast<std::size_t>(t));
    for (std::size_t j = i + 1; j < j_end; ++j) {
      ++local[pack_bigram(seq[i], seq[j])];
    }
  }
}

// General n: walk index tuples with the shared enumerator.
void count_ngrams_budget(const std::vector<Csdc>& seq, int n, int t,
                         std::map<NGramType, std::uint64_t>& local) {
  enumerate_skipgrams(std::span<const Csdc>(seq), n, t,
                      [&](const NGramType& type, std::span<const std::size_t>) {
                        ++local[type];
                      });
}

}  // namespace

CountTable count_skipgrams(const EncodedCorpus& corpus, int n, int t, int threads) {
  if (n < 1) throw ArgumentError("n-gram order must be >= 1");
  if (t < 0) throw ArgumentError("skip budget must be >= 0");

  CountTable table;
  table.n = n;
  table.skip_budget = t;
  threads = resolve_threads(threads);

  const auto movement_count = static_cast<std::int64_t>(corpus.size());

  if (n == 2) {
    std::vector<std::unordered_map<PackedBigram, std::uint64_t>> locals(
        static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
      auto& local = locals[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic)
      for (std::int64_t m = 0; m < movement_count; ++m) {
        count_bigrams_budget(csdc_sequence(corpus[static_cast<std::size_t>(m)]), t, local);
      }
    }
    // Deterministic merge: sums commute, and the result map is ordered.
    for (const auto& local : locals) {
      for (const auto& [key, count] : local) table.counts[unpack_bigram(key)] += count;
    }
    return table;
  }

  std::vector<std::map<NGramType, std::uint64_t>> locals(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
    auto& local = locals[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic)
    for (std::int64_t m = 0; m < movement_count; ++m) {
      const auto seq = csdc_sequence(corpus[static_cast<std::size_t>(m)]);
      if (n == 1) {
        for (Csdc c : seq) ++local[NGramType{{c}}];
      } else {
        count_ngrams_budget(seq, n, t, local);
      }
    }
  }
  for (const auto& local : locals) {
    for (const auto& [type, count] : local) table.counts[type] += count;
  }
  return table;
}

CountTable count_contiguous(const EncodedCorpus& corpus, int n, int threads) {
  return count_skipgrams(corpus, n, 0, threads);
}

std::uint64_t combination_bound(std::uint64_t k, std::uint64_t n) {
  if (n > k) return 0;
  n = std::min(n, k - n);
  constexpr unsigned __int128 limit = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const unsigned __int128 factor = k - n + i;
    if (result > limit * i / factor) {
      throw ArgumentError("combination count overflows 64 bits");
    }
    result = result * factor / i;  // exact: product of i consecutive ints
  }
  return static_cast<std::uint64_t>(result);
}

std::map<NGramType, SkipCountVector> skip_count_vectors(const EncodedCorpus& corpus,
                                                        int t_max, int threads) {
  if (t_max < 0) throw ArgumentError("t_max must be >= 0");
  threads = resolve_threads(threads);

  const std::size_t width = static_cast<std::size_t>(t_max) + 1;
  std::vector<std::unordered_map<PackedBigram, std::vector<std::uint64_t>>> locals(
      static_cast<std::size_t>(threads));

#pragma omp parallel num_threads(threads)
  {
    auto& local = locals[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic)
    for (std::int64_t m = 0; m < static_cast<std::int64_t>(corpus.size()); ++m) {
      const auto seq = csdc_sequence(corpus[static_cast<std::size_t>(m)]);
      const std::size_t k = seq.size();
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j_end = std::min(k, i + 2 + static_cast<std::size_t>(t_max));
        for (std::size_t j = i + 1; j < j_end; ++j) {
          auto& vec = local[pack_bigram(seq[i], seq[j])];
          if (vec.empty()) vec.assign(width, 0);
          ++vec[j - i - 1];
        }
      }
    }
  }

  std::map<NGramType, SkipCountVector> merged;
  for (const auto& local : locals) {
    for (const auto& [key, vec] : local) {
      auto& out = merged[unpack_bigram(key)];
      if (out.counts.empty()) {
        out.type = unpack_bigram(key);
        out.counts.assign(width, 0);
      }
      for (std::size_t t = 0; t < width; ++t) out.counts[t] += vec[t];
    }
  }
  return merged;
}

void write_count_table_csv(std::ostream& out, const CountTable& table) {
  for (int i = 1; i <= table.n; ++i) {
    out << "chord" << i << ',';
  }
  out << "count\n";
  std::vector<std::pair<NGramType, std::uint64_t>> rows(table.counts.begin(),
                                                        table.counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [type, count] : rows) {
    for (const auto& member : type.members) {
      out << csv_quote(member.str()) << ',';
    }
    out << count << "\n";
  }
}

void write_skip_vectors_csv(std::ostream& out,
                            const std::map<NGramType, SkipCountVector>& vectors) {
  int t_max = 0;
  for (const auto& [type, vec] : vectors) t_max = std::max(t_max, vec.t_max());
  out << "type";
  for (int t = 0; t <= t_max; ++t) out << ",t" << t;
  out << "\n";
  std::vector<const SkipCountVector*> rows;
  rows.reserve(vectors.size());
  for (const auto& [type, vec] : vectors) rows.push_back(&vec);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    auto ta = a->total(), tb = b->total();
    if (ta != tb) return ta > tb;
    return a->type < b->type;
  });
  for (const auto* vec : rows) {
    out << csv_quote(vec->type.str());
    for (auto c : vec->counts) out << ',' << c;
    out << "\n";
  }
}

}  // namespace harmgram
