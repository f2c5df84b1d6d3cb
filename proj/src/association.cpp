#include "harmgram/association.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "harmgram/csv.hpp"
#include "harmgram/errors.hpp"

namespace harmgram {

namespace {

int resolve_threads(int threads) { return threads <= 0 ? omp_get_max_threads() : threads; }

std::uint32_t pack_pair(Csdc a, Csdc b) {
  return (static_cast<std::uint32_t>(a.packed()) << 16) | b.packed();
}

}  // namespace

TokenAggregates bigram_token_aggregates(const EncodedCorpus& corpus, int t_limit,
                                        int threads) {
  if (t_limit < 0) throw ArgumentError("t_limit must be >= 0");
  threads = resolve_threads(threads);

  std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> locals(
      static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
    auto& local = locals[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic)
    for (std::int64_t m = 0; m < static_cast<std::int64_t>(corpus.size()); ++m) {
      const auto seq = csdc_sequence(corpus[static_cast<std::size_t>(m)]);
      const std::size_t k = seq.size();
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j_end = std::min(k, i + 2 + static_cast<std::size_t>(t_limit));
        for (std::size_t j = i + 1; j < j_end; ++j) {
          ++local[pack_pair(seq[i], seq[j])];
        }
      }
    }
  }

  TokenAggregates agg;
  agg.t_limit = t_limit;
  for (const auto& local : locals) {
    for (const auto& [key, count] : local) {
      Csdc first = Csdc::from_packed_unchecked(static_cast<std::uint16_t>(key >> 16));
      Csdc second = Csdc::from_packed_unchecked(static_cast<std::uint16_t>(key & 0xFFFF));
      agg.pair_counts[{first, second}] += count;
    }
  }
  for (const auto& [pair, count] : agg.pair_counts) {
    agg.first_counts[pair.first] += count;
    agg.second_counts[pair.second] += count;
    agg.total += count;
  }
  return agg;
}

ContingencyTable contingency_from_aggregates(const TokenAggregates& aggregates,
                                             Csdc chord1, Csdc chord2) {
  ContingencyTable table;
  table.t_limit = aggregates.t_limit;
  auto lookup = [](const auto& map, const auto& key) -> std::uint64_t {
    auto it = map.find(key);
    return it == map.end() ? 0 : it->second;
  };
  table.a = lookup(aggregates.pair_counts, std::make_pair(chord1, chord2));
  table.b = lookup(aggregates.first_counts, chord1) - table.a;
  table.c = lookup(aggregates.second_counts, chord2) - table.a;
  table.d = aggregates.total - table.a - table.b - table.c;
  return table;
}

ContingencyTable contingency(const EncodedCorpus& corpus, Csdc chord1, Csdc chord2,
                             int t_limit, int threads) {
  return contingency_from_aggregates(bigram_token_aggregates(corpus, t_limit, threads),
                                     chord1, chord2);
}

double fisher_exact(const ContingencyTable& table) {
  const std::uint64_t total = table.total();
  if (total == 0) throw StatError("Fisher's exact test is undefined on an empty table");

  const std::uint64_t r1 = table.row1();
  const std::uint64_t c1 = table.col1();

  auto log_fact = [](std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); };
  // log P(X = x) for the hypergeometric with these marginals.
  const double log_const = log_fact(r1) + log_fact(total - r1) + log_fact(c1) +
                           log_fact(total - c1) - log_fact(total);
  auto log_point = [&](std::uint64_t x) {
    return log_const - log_fact(x) - log_fact(r1 - x) - log_fact(c1 - x) -
           log_fact(total - r1 - c1 + x);
  };

  const std::uint64_t x_lo = c1 > total - r1 ? c1 - (total - r1) : 0;
  const std::uint64_t x_hi = std::min(r1, c1);
  const double log_observed = log_point(table.a);

  // Two-sided by the point-probability criterion, with a touch of slack for
  // the log-space rounding of exact ties.
  const double slack = std::log1p(1e-12);
  double p = 0.0;
  for (std::uint64_t x = x_lo; x <= x_hi; ++x) {
    const double lp = log_point(x);
    if (lp <= log_observed + slack) p += std::exp(lp);
  }
  return std::min(p, 1.0);
}

double asym(const ContingencyTable& table) {
  if (table.row1() == 0 || table.col1() == 0) {
    throw StatError("asymmetry undefined: a zero conditional denominator");
  }
  const double forward = static_cast<double>(table.a) / static_cast<double>(table.row1());
  const double backward = static_cast<double>(table.a) / static_cast<double>(table.col1());
  return forward - backward;
}

std::vector<AttractorStats> attractor_table_from_aggregates(
    const TokenAggregates& aggregates, SumAsymConvention convention) {
  struct Accumulator {
    std::uint64_t n_attractor = 0;
    std::uint64_t types_containing = 0;
    double sum_asym = 0;
  };
  std::map<Csdc, Accumulator> acc;

  for (const auto& [pair, count] : aggregates.pair_counts) {
    const auto [x, y] = pair;
    ContingencyTable table = contingency_from_aggregates(aggregates, x, y);
    const double value = asym(table);  // a >= 1, so both conditionals exist

    acc[x].types_containing += 1;
    if (x != y) acc[y].types_containing += 1;

    if (value > 0) {
      acc[y].n_attractor += 1;
    } else if (value < 0) {
      acc[x].n_attractor += 1;
    }

    switch (convention) {
      case SumAsymConvention::received:
        acc[x].sum_asym -= value;
        acc[y].sum_asym += value;
        break;
      case SumAsymConvention::plain:
        acc[x].sum_asym += value;
        if (x != y) acc[y].sum_asym += value;
        break;
    }
  }

  std::vector<AttractorStats> stats;
  stats.reserve(acc.size());
  for (const auto& [csdc, a] : acc) {
    AttractorStats s;
    s.unigram = csdc;
    s.n_attractor = a.n_attractor;
    s.types_containing = a.types_containing;
    s.pct_attractor = a.types_containing == 0
                          ? 0.0
                          : 100.0 * static_cast<double>(a.n_attractor) /
                                static_cast<double>(a.types_containing);
    s.sum_asym = a.sum_asym;
    stats.push_back(s);
  }
  std::stable_sort(stats.begin(), stats.end(),
                   [](const AttractorStats& a, const AttractorStats& b) {
                     if (a.n_attractor != b.n_attractor) return a.n_attractor > b.n_attractor;
                     return a.unigram < b.unigram;
                   });
  return stats;
}

std::vector<AttractorStats> attractor_table(const EncodedCorpus& corpus, int t_limit,
                                            SumAsymConvention convention, int threads) {
  bool any = false;
  for (const auto& movement : corpus) any = any || !movement.events.empty();
  if (!any) throw ArgumentError("attractor statistics need a non-empty corpus");
  return attractor_table_from_aggregates(bigram_token_aggregates(corpus, t_limit, threads),
                                         convention);
}

void write_association_row_csv(std::ostream& out, Csdc chord1, Csdc chord2,
                               const ContingencyTable& table) {
  out << csv_quote(chord1.str()) << ',' << csv_quote(chord2.str()) << ',' << table.a
      << ',' << table.b << ',' << table.c << ',' << table.d << ','
      << fmt_sci(fisher_exact(table), 6) << ',' << fmt_fixed(asym(table), 6) << "\n";
}

void write_association_csv(std::ostream& out, const TokenAggregates& aggregates) {
  out << "chord1,chord2,a,b,c,d,p_value,asym\n";
  for (const auto& [pair, count] : aggregates.pair_counts) {
    write_association_row_csv(out, pair.first, pair.second,
                              contingency_from_aggregates(aggregates, pair.first,
                                                          pair.second));
  }
}

void write_attractors_csv(std::ostream& out, const std::vector<AttractorStats>& stats) {
  out << "rank,n_attractor,pct_attractor,sum_asym,csdc\n";
  int rank = 1;
  for (const auto& s : stats) {
    out << rank++ << ',' << s.n_attractor << ',' << fmt_fixed(s.pct_attractor, 2) << ','
        << fmt_fixed(s.sum_asym, 4) << ',' << csv_quote(s.unigram.str()) << "\n";
  }
}

}  // namespace harmgram
