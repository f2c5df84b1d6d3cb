#include "harmgram/ref.hpp"

#include "harmgram/errors.hpp"

namespace harmgram::ref {

namespace {

// Advances a strictly increasing index tuple through all C(k, n) positions.
bool next_combination(std::vector<std::size_t>& idx, std::size_t k) {
  const std::size_t n = idx.size();
  for (std::size_t slot = n; slot-- > 0;) {
    if (idx[slot] + (n - slot) < k) {
      ++idx[slot];
      for (std::size_t later = slot + 1; later < n; ++later) {
        idx[later] = idx[later - 1] + 1;
      }
      return true;
    }
  }
  return false;
}

int total_skips(const std::vector<std::size_t>& idx) {
  int skips = 0;
  for (std::size_t s = 1; s < idx.size(); ++s) {
    skips += static_cast<int>(idx[s] - idx[s - 1] - 1);
  }
  return skips;
}

}  // namespace

CountTable count_skipgrams_serial(const EncodedCorpus& corpus, int n, int t) {
  if (n < 1) throw ArgumentError("n-gram order must be >= 1");
  if (t < 0) throw ArgumentError("skip budget must be >= 0");
  CountTable table;
  table.n = n;
  table.skip_budget = t;
  for (const auto& movement : corpus) {
    const auto seq = csdc_sequence(movement);
    const std::size_t k = seq.size();
    if (k < static_cast<std::size_t>(n)) continue;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < idx.size(); ++s) idx[s] = s;
    do {
      if (total_skips(idx) > t) continue;
      NGramType type;
      for (std::size_t i : idx) type.members.push_back(seq[i]);
      ++table.counts[type];
    } while (next_combination(idx, k));
  }
  return table;
}

CountTable count_contiguous_serial(const EncodedCorpus& corpus, int n) {
  return count_skipgrams_serial(corpus, n, 0);
}

std::map<NGramType, SkipCountVector> skip_count_vectors_serial(const EncodedCorpus& corpus,
                                                               int t_max) {
  if (t_max < 0) throw ArgumentError("t_max must be >= 0");
  std::map<NGramType, SkipCountVector> vectors;
  for (const auto& movement : corpus) {
    const auto seq = csdc_sequence(movement);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      for (std::size_t j = i + 1; j < seq.size(); ++j) {
        const int gap = static_cast<int>(j - i - 1);
        if (gap > t_max) break;
        auto& vec = vectors[bigram(seq[i], seq[j])];
        if (vec.counts.empty()) {
          vec.type = bigram(seq[i], seq[j]);
          vec.counts.assign(static_cast<std::size_t>(t_max) + 1, 0);
        }
        ++vec.counts[static_cast<std::size_t>(gap)];
      }
    }
  }
  return vectors;
}

}  // namespace harmgram::ref
