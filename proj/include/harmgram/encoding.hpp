#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harmgram/corpus.hpp"
#include "harmgram/rational.hpp"

namespace harmgram {

// Chromatic scale degree: pitch class relative to the tonic. Values 0..11;
// kNoCsd marks an absent chord slot.
using Csd = std::uint8_t;
inline constexpr Csd kNoCsd = 12;

// (pitch mod 12 - tonic) mod 12
Csd map_to_csd(int pitch, int tonic);

// Canonical chord token: bass scale degree plus up to three distinct,
// strictly ascending upper scale degrees (none equal to the bass), with
// absent slots padded by kNoCsd. Packed four-slots-to-a-nibble so that the
// integer order is the lexicographic (bass, u1, u2, u3) order with absent
// slots sorting last.
class Csdc {
 public:
  Csdc() : bits_(pack(0, kNoCsd, kNoCsd, kNoCsd)) {}

  // Validates and canonicalizes: dedupes uppers, drops doublings of the
  // bass, sorts ascending. Throws CapacityError if > 3 distinct remain.
  static Csdc make(Csd bass, std::span<const Csd> uppers);

  Csd bass() const { return static_cast<Csd>((bits_ >> 12) & 0xF); }
  Csd upper(int i) const { return static_cast<Csd>((bits_ >> (8 - 4 * i)) & 0xF); }
  int upper_count() const;
  int distinct_degree_count() const { return 1 + upper_count(); }

  // Bit i set iff scale degree i is present among the uppers / anywhere.
  std::uint16_t upper_mask() const;
  std::uint16_t degree_mask() const {
    return static_cast<std::uint16_t>(upper_mask() | (1u << bass()));
  }

  std::uint16_t packed() const { return bits_; }
  static Csdc from_packed_unchecked(std::uint16_t bits);

  // "b,u1,u2,u3" with '_' for an absent slot, e.g. "7,2,5,11" or "0,4,7,_".
  std::string str() const;
  static Csdc parse(std::string_view text);  // throws ParseError

  auto operator<=>(const Csdc&) const = default;

 private:
  static std::uint16_t pack(Csd b, Csd u1, Csd u2, Csd u3) {
    return static_cast<std::uint16_t>((b << 12) | (u1 << 8) | (u2 << 4) | u3);
  }
  std::uint16_t bits_;
};

// Number of structurally valid chord tokens: 12 basses times all ascending
// upper subsets of the 11 remaining degrees of size 0..3.
std::uint64_t csdc_vocabulary_bound();

// The unconstrained four-slot bound (13 symbols per slot).
std::uint64_t raw_slot_bound();

// Every canonical token, in packed order. Mostly useful for tests.
std::vector<Csdc> enumerate_vocabulary();

// Chord token of one expanded slice: bass = lowest sounding pitch.
Csdc build_csdc(const Slice& slice, const KeySegment& key);

// One encoded slice with everything downstream statistics need.
struct ChordEvent {
  Csdc csdc;
  Rat onset;
  Rat duration;
  Mode mode = Mode::major;
  bool in_pivot = false;
  std::string movement_id;

  int distinct_degree_count() const { return csdc.distinct_degree_count(); }
};

struct EncodedMovement {
  std::string id;
  std::vector<ChordEvent> events;
};

using EncodedCorpus = std::vector<EncodedMovement>;

std::vector<ChordEvent> encode_movement(const Movement& movement);
EncodedCorpus encode_corpus(const std::vector<Movement>& corpus, int threads = 0);

// The chord sequence of a movement, for the counting kernels.
std::vector<Csdc> csdc_sequence(const EncodedMovement& movement);

// ---------------------------------------------------------------------------
// Unigram distribution
// ---------------------------------------------------------------------------

enum class ModeFilter : std::uint8_t { major, minor, both };
enum class WeightScheme : std::uint8_t { duration, count };

struct UnigramOptions {
  ModeFilter mode = ModeFilter::both;
  int min_distinct = 1;  // keep events with at least this many distinct degrees
  WeightScheme weight = WeightScheme::duration;
  bool exclude_pivots = false;
};

struct UnigramDistribution {
  std::map<Csdc, double> proportions;  // sums to 1 over retained events
  std::uint64_t retained = 0;
  std::uint64_t dropped = 0;

  bool empty() const { return retained == 0; }
};

UnigramDistribution unigram_distribution(const EncodedCorpus& corpus,
                                         const UnigramOptions& options);

void write_unigrams_csv(std::ostream& out, const UnigramDistribution& dist);

}  // namespace harmgram
