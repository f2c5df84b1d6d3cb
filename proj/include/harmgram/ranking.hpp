#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "harmgram/ngram.hpp"

namespace harmgram {

// Why a bigram type was excluded from a ranking, if it was.
struct ExclusionReport {
  bool monophony = false;   // either chord has a single distinct degree
  bool polyphony = false;   // neither chord has >= 3 distinct degrees
  bool identity = false;    // same degree sets regardless of inversion
  bool similarity = false;  // same bass, one upper set contains the other

  bool excluded() const { return monophony || polyphony || identity || similarity; }
  std::string str() const;  // triggered names joined by '|', e.g. "identity"
};

ExclusionReport exclusion_flags(Csdc a, Csdc b);

// Least-squares cubic fitted to one skip-count profile.
struct CubicFit {
  double b3 = 0, b2 = 0, b1 = 0, b0 = 0;
  double residual_norm = 0;

  double eval(double t) const { return ((b3 * t + b2) * t + b1) * t + b0; }
};

// Ordinary least squares over the points (t, counts[t]), t = 0..t_max, via
// the 4x4 normal equations with partial pivoting. Needs t_max >= 3.
CubicFit fit_cubic(const SkipCountVector& vector);

struct RankedBigram {
  NGramType type;
  double score = 0;  // token count, or the cubic's leading coefficient
  ExclusionReport report;
};

// Descending count; ties resolved by canonical token order.
std::vector<RankedBigram> rank_by_count(const CountTable& table, bool apply_exclusion);

// Descending leading coefficient; same tie-breaking. Fits run per type.
std::vector<RankedBigram> rank_by_beta3(const std::map<NGramType, SkipCountVector>& vectors,
                                        bool apply_exclusion, int threads = 0);

// 1-based (rank, frequency) pairs sorted descending, for external plotting.
std::vector<std::pair<int, double>> rank_frequency_series(
    const std::map<Csdc, double>& distribution);

// CSV: rank,score,chord1,chord2,excluded_flags. A leading '#' line reports
// the excluded and retained type fractions.
void write_ranking_csv(std::ostream& out, const std::vector<RankedBigram>& ranking,
                       std::size_t candidate_types, std::size_t excluded_types,
                       bool score_is_count);

// How many of a table's bigram types trip the exclusion criteria.
std::size_t count_excluded_types(const CountTable& table);

void write_rank_frequency_csv(std::ostream& out,
                              const std::vector<std::pair<int, double>>& series);

}  // namespace harmgram
