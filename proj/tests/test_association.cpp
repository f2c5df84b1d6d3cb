#include "harmgram/association.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "harmgram/errors.hpp"
#include "harmgram/fixtures.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace harmgram {
namespace {

using testutil::abstract_sequence;
using testutil::corpus_from_sequences;

Csdc tok(const char* text) { return Csdc::parse(text); }

ContingencyTable table_of(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t d, int t_limit = 5) {
  return ContingencyTable{a, b, c, d, t_limit};
}

// A reference dominant-seventh-to-tonic table with corpus-scale counts.
ContingencyTable reference_table() { return table_of(581, 3292, 5635, 106862); }

// ---------------------------------------------------------------------------
// contingency
// ---------------------------------------------------------------------------

TEST(Contingency, ReferenceMarginals) {
  auto table = reference_table();
  EXPECT_EQ(table.row1(), 3873u);
  EXPECT_EQ(table.row2(), 112497u);
  EXPECT_EQ(table.col1(), 6216u);
  EXPECT_EQ(table.col2(), 110154u);
  EXPECT_EQ(table.total(), 116370u);
}

TEST(Contingency, SingleTokenCorpus) {
  auto corpus = corpus_from_sequences({abstract_sequence({2, 9})});
  auto table = contingency(corpus, tok("2,_,_,_"), tok("9,_,_,_"), 5);
  EXPECT_EQ(table.a, 1u);
  EXPECT_EQ(table.b, 0u);
  EXPECT_EQ(table.c, 0u);
  EXPECT_EQ(table.d, 0u);
}

TEST(Contingency, CellsMatchExhaustiveTokenClassification) {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<Csdc>> sequences;
    for (int m = 0; m < 4; ++m) {
      std::vector<int> symbols;
      for (int i = 0; i < 4 + rng.below(9); ++i) symbols.push_back(rng.below(3));
      sequences.push_back(abstract_sequence(symbols));
    }
    auto corpus = corpus_from_sequences(sequences);
    const int t_limit = rng.below(4);
    Csdc chord1 = Csdc::make(static_cast<Csd>(rng.below(3)), {});
    Csdc chord2 = Csdc::make(static_cast<Csd>(rng.below(3)), {});

    // Classify every token directly.
    std::uint64_t a = 0, b = 0, c = 0, d = 0;
    for (const auto& movement : corpus) {
      const auto seq = csdc_sequence(movement);
      for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1;
             j < seq.size() && static_cast<int>(j - i - 1) <= t_limit; ++j) {
          const bool first = seq[i] == chord1;
          const bool second = seq[j] == chord2;
          a += first && second;
          b += first && !second;
          c += !first && second;
          d += !first && !second;
        }
      }
    }
    auto table = contingency(corpus, chord1, chord2, t_limit);
    EXPECT_EQ(table.a, a) << "trial " << trial;
    EXPECT_EQ(table.b, b);
    EXPECT_EQ(table.c, c);
    EXPECT_EQ(table.d, d);
  }
}

TEST(Contingency, CellConservation) {
  FixtureConfig config;
  config.movements = 6;
  config.slices_per_movement = 50;
  auto corpus = encode_corpus(generate_fixture_corpus(config), 2);
  const int t_limit = 5;
  auto aggregates = bigram_token_aggregates(corpus, t_limit);

  // Independent total: per movement sum of pair counts with gap <= t.
  std::uint64_t expected = 0;
  for (const auto& movement : corpus) {
    const auto k = static_cast<std::int64_t>(movement.events.size());
    for (int t = 0; t <= t_limit; ++t) {
      expected += static_cast<std::uint64_t>(std::max<std::int64_t>(k - 1 - t, 0));
    }
  }
  EXPECT_EQ(aggregates.total, expected);

  auto table = contingency_from_aggregates(aggregates, tok("0,4,7,_"), tok("7,2,5,11"));
  EXPECT_EQ(table.total(), expected);
}

// ---------------------------------------------------------------------------
// fisher_exact
// ---------------------------------------------------------------------------

TEST(FisherExact, SymmetricUnitTableIsIndependent) {
  EXPECT_DOUBLE_EQ(fisher_exact(table_of(1, 1, 1, 1)), 1.0);
}

TEST(FisherExact, ReferenceTableIsVanishinglySmall) {
  EXPECT_LT(fisher_exact(reference_table()), 1e-4);
}

TEST(FisherExact, AllZeroTableRejected) {
  EXPECT_THROW(fisher_exact(table_of(0, 0, 0, 0)), StatError);
}

TEST(FisherExact, DegenerateMarginalGivesCertainty) {
  // An empty row pins the table: only one outcome is possible.
  EXPECT_DOUBLE_EQ(fisher_exact(table_of(0, 0, 3, 5)), 1.0);
  EXPECT_DOUBLE_EQ(fisher_exact(table_of(0, 4, 0, 5)), 1.0);
}

TEST(FisherExact, MatchesRationalEnumerationUpToTotalEight) {
  for (std::uint64_t a = 0; a <= 8; ++a) {
    for (std::uint64_t b = 0; a + b <= 8; ++b) {
      for (std::uint64_t c = 0; a + b + c <= 8; ++c) {
        for (std::uint64_t d = (a + b + c == 0 ? 1u : 0u); a + b + c + d <= 8; ++d) {
          const double actual = fisher_exact(table_of(a, b, c, d));
          const double expected = oracle::fisher_by_rational_enumeration(a, b, c, d);
          EXPECT_NEAR(actual, expected, 1e-9)
              << "(" << a << "," << b << "," << c << "," << d << ")";
        }
      }
    }
  }
}

TEST(FisherExact, TransposeSymmetry) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = static_cast<std::uint64_t>(rng.below(40));
    auto b = static_cast<std::uint64_t>(rng.below(40));
    auto c = static_cast<std::uint64_t>(rng.below(40));
    auto d = static_cast<std::uint64_t>(rng.below(40));
    if (a + b + c + d == 0) continue;
    const double p = fisher_exact(table_of(a, b, c, d));
    const double pt = fisher_exact(table_of(a, c, b, d));
    EXPECT_NEAR(p, pt, 1e-12 * std::max(1.0, p));
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

// ---------------------------------------------------------------------------
// asym
// ---------------------------------------------------------------------------

TEST(Asym, ReferenceValue) {
  const double value = asym(reference_table());
  EXPECT_NEAR(value, 0.0565, 0.0005);
  EXPECT_GT(value, 0.0);  // the second chord attracts
}

TEST(Asym, EqualOffDiagonalCellsGiveZero) {
  EXPECT_DOUBLE_EQ(asym(table_of(10, 7, 7, 100)), 0.0);
}

TEST(Asym, UndefinedWithoutConditionals) {
  EXPECT_THROW(asym(table_of(0, 0, 3, 5)), StatError);
  EXPECT_THROW(asym(table_of(0, 4, 0, 5)), StatError);
}

TEST(Asym, RangeAndCellSwapAntisymmetry) {
  Rng rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = static_cast<std::uint64_t>(1 + rng.below(50));
    auto b = static_cast<std::uint64_t>(rng.below(50));
    auto c = static_cast<std::uint64_t>(rng.below(50));
    auto d = static_cast<std::uint64_t>(rng.below(50));
    const double value = asym(table_of(a, b, c, d));
    EXPECT_GE(value, -1.0);
    EXPECT_LE(value, 1.0);
    // Reversing the bigram orientation swaps b and c.
    EXPECT_NEAR(asym(table_of(a, c, b, d)), -value, 1e-15);
  }
}

// ---------------------------------------------------------------------------
// attractor_table
// ---------------------------------------------------------------------------

TEST(AttractorTable, SinkChordAttractsEverywhere) {
  // Every bigram token ends in symbol 0: x -> 0 for x in {1, 2, 3}.
  auto corpus = corpus_from_sequences({
      abstract_sequence({1, 0}),
      abstract_sequence({2, 0}),
      abstract_sequence({3, 0}),
      abstract_sequence({1, 0}),
  });
  auto stats = attractor_table(corpus, 0);
  ASSERT_FALSE(stats.empty());
  EXPECT_EQ(stats[0].unigram, tok("0,_,_,_"));
  EXPECT_EQ(stats[0].n_attractor, 3u);
  EXPECT_DOUBLE_EQ(stats[0].pct_attractor, 100.0);
}

TEST(AttractorTable, BalancedBigramAttractsNobody) {
  // a -> b and b -> a equally often: both asymmetries are zero.
  auto corpus = corpus_from_sequences({abstract_sequence({0, 1, 0, 1, 0})});
  auto stats = attractor_table(corpus, 0);
  for (const auto& s : stats) {
    if (s.unigram == tok("0,_,_,_") || s.unigram == tok("1,_,_,_")) {
      EXPECT_EQ(s.n_attractor, 0u) << s.unigram.str();
    }
  }
}

TEST(AttractorTable, MatchesPerTypeRecomputation) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<Csdc>> sequences;
    for (int m = 0; m < 4; ++m) {
      std::vector<int> symbols;
      for (int i = 0; i < 5 + rng.below(10); ++i) symbols.push_back(rng.below(4));
      sequences.push_back(abstract_sequence(symbols));
    }
    auto corpus = corpus_from_sequences(sequences);
    const int t_limit = rng.below(3);
    auto aggregates = bigram_token_aggregates(corpus, t_limit);
    auto stats = attractor_table(corpus, t_limit);

    // Brute recomputation per unigram.
    for (const auto& s : stats) {
      std::uint64_t n_attractor = 0, containing = 0;
      double sum = 0;
      for (const auto& [pair, count] : aggregates.pair_counts) {
        const auto [x, y] = pair;
        if (x != s.unigram && y != s.unigram) continue;
        ++containing;
        const double value = asym(contingency_from_aggregates(aggregates, x, y));
        if (value > 0 && y == s.unigram) ++n_attractor;
        if (value < 0 && x == s.unigram) ++n_attractor;
        if (x == s.unigram) sum -= value;
        if (y == s.unigram) sum += value;
      }
      EXPECT_EQ(s.n_attractor, n_attractor) << s.unigram.str();
      EXPECT_EQ(s.types_containing, containing);
      EXPECT_NEAR(s.sum_asym, sum, 1e-12);
      EXPECT_NEAR(s.pct_attractor,
                  100.0 * static_cast<double>(n_attractor) /
                      static_cast<double>(containing),
                  1e-12);
      EXPECT_GE(s.pct_attractor, 0.0);
      EXPECT_LE(s.pct_attractor, 100.0);
    }
  }
}

TEST(AttractorTable, ReceivedSumsCancelOverUnigrams) {
  // With the received convention every bigram adds +asym to one member and
  // -asym to the other, so the grand total vanishes.
  FixtureConfig config;
  config.movements = 4;
  config.slices_per_movement = 40;
  auto corpus = encode_corpus(generate_fixture_corpus(config), 2);
  auto stats = attractor_table(corpus, 5, SumAsymConvention::received);
  double grand = 0;
  for (const auto& s : stats) grand += s.sum_asym;
  EXPECT_NEAR(grand, 0.0, 1e-9);
}

TEST(AttractorTable, PlainConventionDiffersFromReceived) {
  auto corpus = corpus_from_sequences({abstract_sequence({1, 0, 1, 0, 0, 1, 0})});
  auto received = attractor_table(corpus, 1, SumAsymConvention::received);
  auto plain = attractor_table(corpus, 1, SumAsymConvention::plain);
  ASSERT_EQ(received.size(), plain.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < received.size(); ++i) {
    EXPECT_EQ(received[i].n_attractor, plain[i].n_attractor);
    any_diff = any_diff || std::abs(received[i].sum_asym - plain[i].sum_asym) > 1e-12;
  }
  EXPECT_TRUE(any_diff);
}

TEST(AttractorTable, EmptyCorpusRejected) {
  EXPECT_THROW(attractor_table({}, 5), ArgumentError);
}

}  // namespace
}  // namespace harmgram
