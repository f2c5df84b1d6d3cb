#include "harmgram/corpus.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "harmgram/errors.hpp"
#include "harmgram/fixtures.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace harmgram {
namespace {

Movement parse_strings(const std::string& notes, const std::string& keys,
                       const std::string& id = "test") {
  std::istringstream note_stream(notes);
  std::istringstream key_stream(keys);
  return parse_movement(note_stream, key_stream, id);
}

// ---------------------------------------------------------------------------
// parse_movement
// ---------------------------------------------------------------------------

TEST(ParseMovement, MinimalWellFormedInput) {
  auto movement = parse_strings("#parts=1\n0\t1\t1\t1\t60\t0\n",
                                "0\t1\t4\t1\t0\tmajor\t0\n");
  ASSERT_EQ(movement.notes.size(), 1u);
  EXPECT_EQ(movement.notes[0].onset, Rat(0));
  EXPECT_EQ(movement.notes[0].duration, Rat(1));
  EXPECT_EQ(movement.notes[0].pitch, 60);
  EXPECT_EQ(movement.notes[0].part, 0);
  ASSERT_EQ(movement.keys.size(), 1u);
  EXPECT_EQ(movement.keys[0].tonic, 0);
  EXPECT_EQ(movement.keys[0].mode, Mode::major);
  EXPECT_FALSE(movement.keys[0].is_pivot);
}

TEST(ParseMovement, SpacesAcceptedAsSeparators) {
  auto movement =
      parse_strings("#parts=2\n0 1 1 2 67 1\n", "0 1 4 1 7 minor 0\n");
  EXPECT_EQ(movement.notes[0].duration, Rat(1, 2));
  EXPECT_EQ(movement.keys[0].mode, Mode::minor);
}

TEST(ParseMovement, OnsetOutsideKeyCoverageFails) {
  EXPECT_THROW(parse_strings("#parts=1\n10\t1\t1\t1\t60\t0\n",
                             "0\t1\t8\t1\t0\tmajor\t0\n"),
               ValidationError);
}

TEST(ParseMovement, OverlappingNonPivotSegmentsFail) {
  EXPECT_THROW(parse_strings("#parts=1\n0\t1\t1\t1\t60\t0\n",
                             "0\t1\t4\t1\t0\tmajor\t0\n2\t1\t6\t1\t7\tmajor\t0\n"),
               ValidationError);
}

TEST(ParseMovement, PivotMayOverlapNonPivots) {
  auto movement = parse_strings(
      "#parts=1\n0\t1\t1\t1\t60\t0\n5\t1\t1\t1\t62\t0\n",
      "0\t1\t4\t1\t0\tmajor\t0\n4\t1\t8\t1\t7\tmajor\t0\n3\t1\t5\t1\t0\tmajor\t1\n");
  EXPECT_EQ(movement.keys.size(), 3u);
  EXPECT_FALSE(movement.in_pivot(Rat(0)));
  EXPECT_TRUE(movement.in_pivot(Rat(4)));
  EXPECT_EQ(movement.key_at(Rat(4)).tonic, 7);
}

TEST(ParseMovement, MalformedRowNamesLineNumber) {
  try {
    parse_strings("#parts=1\n0\t1\t1\t1\t60\t0\nbroken row here\n",
                  "0\t1\t4\t1\t0\tmajor\t0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ParseMovement, RejectsZeroDuration) {
  EXPECT_THROW(parse_strings("#parts=1\n0\t1\t0\t1\t60\t0\n",
                             "0\t1\t4\t1\t0\tmajor\t0\n"),
               ParseError);
}

TEST(ParseMovement, RejectsPartOutOfRange) {
  EXPECT_THROW(parse_strings("#parts=2\n0\t1\t1\t1\t60\t2\n",
                             "0\t1\t4\t1\t0\tmajor\t0\n"),
               ParseError);
}

TEST(ParseMovement, RequiresPartsHeader) {
  EXPECT_THROW(parse_strings("0\t1\t1\t1\t60\t0\n", "0\t1\t4\t1\t0\tmajor\t0\n"),
               ParseError);
}

TEST(ParseMovement, RandomMovementsRoundTrip) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    Movement original = testutil::random_movement(rng, 4 + rng.below(40));
    std::ostringstream notes, keys;
    serialize_movement(original, notes, keys);
    Movement reparsed = parse_strings(notes.str(), keys.str(), "random");
    EXPECT_EQ(original, reparsed) << "trial " << trial;

    // Canonical form is a fixed point of serialize(parse(.)).
    std::ostringstream notes2, keys2;
    serialize_movement(reparsed, notes2, keys2);
    EXPECT_EQ(notes.str(), notes2.str());
    EXPECT_EQ(keys.str(), keys2.str());
  }
}

TEST(ParseMovement, FixtureCorpusRoundTrips) {
  FixtureConfig config;
  config.movements = 4;
  config.slices_per_movement = 30;
  for (const auto& movement : generate_fixture_corpus(config)) {
    std::ostringstream notes, keys;
    serialize_movement(movement, notes, keys);
    EXPECT_EQ(parse_strings(notes.str(), keys.str(), movement.id), movement);
  }
}

// ---------------------------------------------------------------------------
// full_expansion
// ---------------------------------------------------------------------------

TEST(FullExpansion, CoincidentNotesShareOneSlice) {
  Movement movement;
  movement.id = "m";
  movement.part_count = 2;
  movement.notes = {{Rat(0), Rat(2), 60, 0}, {Rat(0), Rat(2), 64, 1}};
  movement.keys = {{Rat(0), Rat(4), 0, Mode::major, false}};
  auto slices = full_expansion(movement);
  ASSERT_EQ(slices.size(), 1u);
  EXPECT_EQ(slices[0].sounding.size(), 2u);
  EXPECT_EQ(slices[0].duration, Rat(2));
}

TEST(FullExpansion, OverlapDuplicatesHeldNote) {
  Movement movement;
  movement.id = "m";
  movement.part_count = 2;
  movement.notes = {{Rat(0), Rat(2), 60, 0}, {Rat(1), Rat(1), 64, 1}};
  movement.keys = {{Rat(0), Rat(4), 0, Mode::major, false}};
  auto slices = full_expansion(movement);
  ASSERT_EQ(slices.size(), 2u);
  EXPECT_EQ(slices[0].sounding.size(), 1u);
  ASSERT_EQ(slices[1].sounding.size(), 2u);
  EXPECT_EQ(slices[1].onset, Rat(1));
  EXPECT_EQ(slices[1].duration, Rat(1));
}

TEST(FullExpansion, SilentGapAbsorbedByPrecedingSlice) {
  Movement movement;
  movement.id = "m";
  movement.part_count = 1;
  movement.notes = {{Rat(0), Rat(1), 60, 0}, {Rat(5), Rat(1), 62, 0}};
  movement.keys = {{Rat(0), Rat(8), 0, Mode::major, false}};
  auto slices = full_expansion(movement);
  ASSERT_EQ(slices.size(), 2u);
  EXPECT_EQ(slices[0].duration, Rat(5));  // spans to the next onset
  EXPECT_EQ(slices[0].sounding.size(), 1u);
  EXPECT_EQ(slices[1].duration, Rat(1));
}

TEST(FullExpansion, MatchesContainmentOracleOnRandomMovements) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Movement movement = testutil::random_movement(rng, 20);
    auto slices = full_expansion(movement);
    auto expected = oracle::slices_by_containment(movement);

    ASSERT_EQ(slices.size(), expected.size()) << "trial " << trial;
    for (std::size_t i = 0; i < slices.size(); ++i) {
      EXPECT_EQ(slices[i].onset, expected[i].onset);
      EXPECT_EQ(slices[i].sounding, expected[i].sounding) << "trial " << trial;
    }
  }
}

TEST(FullExpansion, InvariantsOnRandomMovements) {
  Rng rng(123);
  for (int trial = 0; trial < 60; ++trial) {
    Movement movement = testutil::random_movement(rng, 3 + rng.below(30));
    auto slices = full_expansion(movement);

    std::set<Rat> distinct_onsets;
    Rat min_onset = movement.notes.front().onset;
    Rat max_offset = min_onset;
    for (const auto& n : movement.notes) {
      distinct_onsets.insert(n.onset);
      max_offset = std::max(max_offset, n.onset + n.duration);
    }
    EXPECT_EQ(slices.size(), distinct_onsets.size());

    Rat duration_sum{0};
    for (std::size_t i = 0; i < slices.size(); ++i) {
      EXPECT_FALSE(slices[i].sounding.empty());
      EXPECT_GT(slices[i].duration, Rat(0));
      if (i > 0) {
        EXPECT_LT(slices[i - 1].onset, slices[i].onset);
      }
      duration_sum += slices[i].duration;
    }
    EXPECT_EQ(duration_sum, max_offset - min_onset);
  }
}

}  // namespace
}  // namespace harmgram
