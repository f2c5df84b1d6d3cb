#pragma once

#include <map>

#include "harmgram/ngram.hpp"

namespace harmgram::ref {

// Serial reference implementations of the counting kernels: single-threaded,
// written as plain exhaustive loops with no shared code beyond the token
// types. The tests cross-check the OpenMP kernels against these, and the
// benchmark target compares their throughput.

CountTable count_skipgrams_serial(const EncodedCorpus& corpus, int n, int t);
CountTable count_contiguous_serial(const EncodedCorpus& corpus, int n);
std::map<NGramType, SkipCountVector> skip_count_vectors_serial(const EncodedCorpus& corpus,
                                                               int t_max);

}  // namespace harmgram::ref
