#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "harmgram/ngram.hpp"

namespace harmgram {

// 2x2 contingency table over the bigram tokens with at most t_limit skips:
// a = chord1 then chord2, b = chord1 then other, c = other then chord2,
// d = neither. Marginals are always recomputed from the cells.
struct ContingencyTable {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
  int t_limit = 0;

  std::uint64_t row1() const { return a + b; }
  std::uint64_t row2() const { return c + d; }
  std::uint64_t col1() const { return a + c; }
  std::uint64_t col2() const { return b + d; }
  std::uint64_t total() const { return a + b + c + d; }
};

// Token marginals shared by every per-type table at a given skip cap.
// Building them once makes the full attractor scan a single corpus pass.
struct TokenAggregates {
  std::map<std::pair<Csdc, Csdc>, std::uint64_t> pair_counts;
  std::map<Csdc, std::uint64_t> first_counts;   // tokens whose first member is x
  std::map<Csdc, std::uint64_t> second_counts;  // tokens whose second member is y
  std::uint64_t total = 0;
  int t_limit = 0;
};

TokenAggregates bigram_token_aggregates(const EncodedCorpus& corpus, int t_limit,
                                        int threads = 0);

ContingencyTable contingency_from_aggregates(const TokenAggregates& aggregates,
                                             Csdc chord1, Csdc chord2);

ContingencyTable contingency(const EncodedCorpus& corpus, Csdc chord1, Csdc chord2,
                             int t_limit, int threads = 0);

// Two-sided Fisher's exact test: the sum of hypergeometric probabilities of
// every table with the same marginals whose point probability does not
// exceed the observed one. Log-space so that corpus-sized marginals do not
// overflow. Throws StatError on an all-zero table.
double fisher_exact(const ContingencyTable& table);

// Directional asymmetry a/(a+b) - a/(a+c), in [-1, 1]. Positive means
// chord2 attracts, negative means chord1 attracts. Throws StatError when a
// conditional is undefined.
double asym(const ContingencyTable& table);

// How the per-type asymmetries aggregate into a unigram's sum:
//   received - sign-corrected per position (+asym as chord2, -asym as chord1)
//   plain    - raw asym added once per type the unigram appears in
enum class SumAsymConvention : std::uint8_t { received, plain };

struct AttractorStats {
  Csdc unigram;
  std::uint64_t n_attractor = 0;       // bigram types where this chord attracts
  std::uint64_t types_containing = 0;  // bigram types this chord appears in
  double pct_attractor = 0;            // 100 * n_attractor / types_containing
  double sum_asym = 0;
};

// Per-unigram attractor statistics over every bigram type present, ranked
// by n_attractor descending (ties in canonical token order).
std::vector<AttractorStats> attractor_table(
    const EncodedCorpus& corpus, int t_limit,
    SumAsymConvention convention = SumAsymConvention::received, int threads = 0);

std::vector<AttractorStats> attractor_table_from_aggregates(
    const TokenAggregates& aggregates,
    SumAsymConvention convention = SumAsymConvention::received);

// CSV writers: "chord1,chord2,a,b,c,d,p_value,asym" for per-type tables and
// "rank,n_attractor,pct_attractor,sum_asym,csdc" for attractor rankings.
void write_association_csv(std::ostream& out, const TokenAggregates& aggregates);
void write_association_row_csv(std::ostream& out, Csdc chord1, Csdc chord2,
                               const ContingencyTable& table);
void write_attractors_csv(std::ostream& out, const std::vector<AttractorStats>& stats);

}  // namespace harmgram
