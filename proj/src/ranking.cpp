#include "harmgram/ranking.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "harmgram/csv.hpp"
#include "harmgram/errors.hpp"

namespace harmgram {

std::string ExclusionReport::str() const {
  std::string out;
  auto add = [&](bool flag, const char* name) {
    if (!flag) return;
    if (!out.empty()) out.push_back('|');
    out += name;
  };
  add(monophony, "monophony");
  add(polyphony, "polyphony");
  add(identity, "identity");
  add(similarity, "similarity");
  return out;
}

ExclusionReport exclusion_flags(Csdc a, Csdc b) {
  ExclusionReport report;
  report.monophony = a.distinct_degree_count() == 1 || b.distinct_degree_count() == 1;
  report.polyphony = a.distinct_degree_count() < 3 && b.distinct_degree_count() < 3;
  report.identity = a.degree_mask() == b.degree_mask();
  // Similarity compares chords that actually have upper parts; monophonic
  // chords are already covered by the first criterion.
  const std::uint16_t ua = a.upper_mask();
  const std::uint16_t ub = b.upper_mask();
  report.similarity = a.bass() == b.bass() && ua != 0 && ub != 0 &&
                      ((ua & ub) == ua || (ua & ub) == ub);
  return report;
}

namespace {

// Solves the 4x4 system in place with partial pivoting.
std::array<double, 4> solve4(std::array<std::array<double, 5>, 4> m) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 4; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    std::swap(m[col], m[pivot]);
    if (m[col][col] == 0.0) throw StatError("singular normal equations");
    for (int row = col + 1; row < 4; ++row) {
      double factor = m[row][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[row][c] -= factor * m[col][c];
    }
  }
  std::array<double, 4> x{};
  for (int row = 3; row >= 0; --row) {
    double sum = m[row][4];
    for (int c = row + 1; c < 4; ++c) sum -= m[row][c] * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(row)] = sum / m[row][row];
  }
  return x;
}

}  // namespace

CubicFit fit_cubic(const SkipCountVector& vector) {
  const int t_max = vector.t_max();
  if (t_max < 3) {
    throw StatError("cubic fit needs at least 4 points (t_max >= 3), got t_max = " +
                    std::to_string(t_max));
  }

  // Normal equations: moments s_p = sum t^p and rhs_p = sum t^p * y_t.
  std::array<double, 7> s{};
  std::array<double, 4> rhs{};
  for (int t = 0; t <= t_max; ++t) {
    double power = 1.0;
    double y = static_cast<double>(vector.counts[static_cast<std::size_t>(t)]);
    for (int p = 0; p <= 6; ++p) {
      s[static_cast<std::size_t>(p)] += power;
      if (p <= 3) rhs[static_cast<std::size_t>(p)] += power * y;
      power *= t;
    }
  }
  std::array<std::array<double, 5>, 4> m{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          s[static_cast<std::size_t>(r + c)];
    }
    m[static_cast<std::size_t>(r)][4] = rhs[static_cast<std::size_t>(r)];
  }
  auto beta = solve4(m);

  CubicFit fit;
  fit.b0 = beta[0];
  fit.b1 = beta[1];
  fit.b2 = beta[2];
  fit.b3 = beta[3];
  double rss = 0.0;
  for (int t = 0; t <= t_max; ++t) {
    double r = static_cast<double>(vector.counts[static_cast<std::size_t>(t)]) -
               fit.eval(static_cast<double>(t));
    rss += r * r;
  }
  fit.residual_norm = std::sqrt(rss);
  return fit;
}

namespace {

void sort_ranked(std::vector<RankedBigram>& ranked) {
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedBigram& a, const RankedBigram& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.type < b.type;
                   });
}

}  // namespace

std::vector<RankedBigram> rank_by_count(const CountTable& table, bool apply_exclusion) {
  if (table.n != 2) throw ArgumentError("count ranking expects a bigram table");
  std::vector<RankedBigram> ranked;
  ranked.reserve(table.counts.size());
  for (const auto& [type, count] : table.counts) {
    RankedBigram row;
    row.type = type;
    row.score = static_cast<double>(count);
    row.report = exclusion_flags(type.members[0], type.members[1]);
    if (apply_exclusion && row.report.excluded()) continue;
    ranked.push_back(std::move(row));
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<RankedBigram> rank_by_beta3(const std::map<NGramType, SkipCountVector>& vectors,
                                        bool apply_exclusion, int threads) {
  if (threads <= 0) threads = omp_get_max_threads();
  std::vector<const SkipCountVector*> items;
  items.reserve(vectors.size());
  int t_max = -1;
  for (const auto& [type, vec] : vectors) {
    if (t_max < 0) t_max = vec.t_max();
    if (vec.t_max() != t_max) {
      throw ArgumentError("skip-count vectors must share t_max");
    }
    items.push_back(&vec);
  }

  std::vector<double> beta3(items.size());
  std::exception_ptr error;
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(items.size()); ++i) {
    try {
      beta3[static_cast<std::size_t>(i)] = fit_cubic(*items[static_cast<std::size_t>(i)]).b3;
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  std::vector<RankedBigram> ranked;
  ranked.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    RankedBigram row;
    row.type = items[i]->type;
    row.score = beta3[i];
    row.report = exclusion_flags(row.type.members[0], row.type.members[1]);
    if (apply_exclusion && row.report.excluded()) continue;
    ranked.push_back(std::move(row));
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<std::pair<int, double>> rank_frequency_series(
    const std::map<Csdc, double>& distribution) {
  if (distribution.empty()) throw ArgumentError("empty distribution has no rank series");
  std::vector<double> freqs;
  freqs.reserve(distribution.size());
  for (const auto& [csdc, f] : distribution) freqs.push_back(f);
  std::sort(freqs.begin(), freqs.end(), std::greater<>());
  std::vector<std::pair<int, double>> series;
  series.reserve(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    series.emplace_back(static_cast<int>(i) + 1, freqs[i]);
  }
  return series;
}

void write_ranking_csv(std::ostream& out, const std::vector<RankedBigram>& ranking,
                       std::size_t candidate_types, std::size_t excluded_types,
                       bool score_is_count) {
  // The excluded share of types is worth reporting both ways round.
  const std::size_t retained = candidate_types - std::min(candidate_types, excluded_types);
  auto pct = [&](std::size_t part) {
    return candidate_types == 0 ? 0.0
                                : 100.0 * static_cast<double>(part) /
                                      static_cast<double>(candidate_types);
  };
  out << "# candidate_types=" << candidate_types << " excluded=" << excluded_types
      << " (" << fmt_fixed(pct(excluded_types), 2) << "%) retained=" << retained << " ("
      << fmt_fixed(pct(retained), 2) << "%)\n";
  out << "rank,score,chord1,chord2,excluded_flags\n";
  int rank = 1;
  for (const auto& row : ranking) {
    out << rank++ << ',';
    if (score_is_count) {
      out << static_cast<std::uint64_t>(row.score);
    } else {
      out << fmt_fixed(row.score, 6);
    }
    out << ',' << csv_quote(row.type.members[0].str()) << ','
        << csv_quote(row.type.members[1].str()) << ',' << csv_quote(row.report.str())
        << "\n";
  }
}

std::size_t count_excluded_types(const CountTable& table) {
  if (table.n != 2) throw ArgumentError("exclusion criteria apply to bigram tables");
  std::size_t excluded = 0;
  for (const auto& [type, count] : table.counts) {
    excluded += exclusion_flags(type.members[0], type.members[1]).excluded();
  }
  return excluded;
}

void write_rank_frequency_csv(std::ostream& out,
                              const std::vector<std::pair<int, double>>& series) {
  out << "rank,frequency\n";
  for (const auto& [rank, freq] : series) {
    out << rank << ',' << fmt_fixed(freq, 9) << "\n";
  }
}

}  // namespace harmgram
