#include "harmgram/encoding.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <ostream>

#include "harmgram/csv.hpp"
#include "harmgram/errors.hpp"

namespace harmgram {

Csd map_to_csd(int pitch, int tonic) {
  if (tonic < 0 || tonic > 11) throw ArgumentError("tonic must be in 0..11");
  int pc = pitch % 12;
  if (pc < 0) pc += 12;
  return static_cast<Csd>(((pc - tonic) % 12 + 12) % 12);
}

Csdc Csdc::make(Csd bass, std::span<const Csd> uppers) {
  if (bass > 11) throw ArgumentError("bass scale degree must be in 0..11");
  std::array<Csd, 16> distinct{};
  std::size_t n = 0;
  for (Csd u : uppers) {
    if (u == kNoCsd) continue;
    if (u > 11) throw ArgumentError("upper scale degree must be in 0..11");
    if (u == bass) continue;  // no doublings of the bass
    bool seen = false;
    for (std::size_t i = 0; i < n; ++i) seen = seen || distinct[i] == u;
    if (!seen) distinct[n++] = u;
  }
  if (n > 3) {
    throw CapacityError("slice has " + std::to_string(n) +
                        " distinct non-bass scale degrees; at most 3 fit a chord token");
  }
  std::sort(distinct.begin(), distinct.begin() + static_cast<long>(n));
  Csdc out;
  out.bits_ = pack(bass, n > 0 ? distinct[0] : kNoCsd, n > 1 ? distinct[1] : kNoCsd,
                   n > 2 ? distinct[2] : kNoCsd);
  return out;
}

int Csdc::upper_count() const {
  int n = 0;
  for (int i = 0; i < 3; ++i) n += upper(i) != kNoCsd;
  return n;
}

std::uint16_t Csdc::upper_mask() const {
  std::uint16_t mask = 0;
  for (int i = 0; i < 3; ++i) {
    if (upper(i) != kNoCsd) mask |= static_cast<std::uint16_t>(1u << upper(i));
  }
  return mask;
}

Csdc Csdc::from_packed_unchecked(std::uint16_t bits) {
  Csdc out;
  out.bits_ = bits;
  return out;
}

std::string Csdc::str() const {
  std::string out = std::to_string(bass());
  for (int i = 0; i < 3; ++i) {
    out.push_back(',');
    if (upper(i) == kNoCsd) {
      out.push_back('_');
    } else {
      out += std::to_string(upper(i));
    }
  }
  return out;
}

Csdc Csdc::parse(std::string_view text) {
  std::array<Csd, 4> slot{};
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t end = text.find(',', pos);
    std::string_view field = text.substr(pos, end == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : end - pos);
    if (i < 3 && end == std::string_view::npos) {
      throw ParseError("chord token '" + std::string(text) + "': expected 4 fields");
    }
    if (field == "_") {
      slot[static_cast<std::size_t>(i)] = kNoCsd;
    } else {
      int value = -1;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size() || value < 0 ||
          value > 11) {
        throw ParseError("chord token '" + std::string(text) + "': bad field '" +
                         std::string(field) + "'");
      }
      slot[static_cast<std::size_t>(i)] = static_cast<Csd>(value);
    }
    pos = end == std::string_view::npos ? text.size() : end + 1;
  }
  if (pos < text.size()) {
    throw ParseError("chord token '" + std::string(text) + "': trailing fields");
  }
  if (slot[0] == kNoCsd) {
    throw ParseError("chord token '" + std::string(text) + "': bass cannot be '_'");
  }
  return Csdc::make(slot[0], std::span<const Csd>(slot.data() + 1, 3));
}

std::uint64_t csdc_vocabulary_bound() {
  // 12 * sum_{j=0..3} C(11, j)
  std::uint64_t total = 0;
  for (int j = 0; j <= 3; ++j) {
    std::uint64_t c = 1;
    for (int i = 0; i < j; ++i) c = c * static_cast<std::uint64_t>(11 - i) / (i + 1);
    total += c;
  }
  return 12 * total;
}

std::uint64_t raw_slot_bound() { return 13ull * 13ull * 13ull * 13ull; }

std::vector<Csdc> enumerate_vocabulary() {
  std::vector<Csdc> vocab;
  for (Csd bass = 0; bass <= 11; ++bass) {
    vocab.push_back(Csdc::make(bass, {}));
    for (Csd u1 = 0; u1 <= 11; ++u1) {
      if (u1 == bass) continue;
      std::array<Csd, 3> one{u1, kNoCsd, kNoCsd};
      vocab.push_back(Csdc::make(bass, std::span<const Csd>(one.data(), 1)));
      for (Csd u2 = u1 + 1; u2 <= 11; ++u2) {
        if (u2 == bass) continue;
        std::array<Csd, 3> two{u1, u2, kNoCsd};
        vocab.push_back(Csdc::make(bass, std::span<const Csd>(two.data(), 2)));
        for (Csd u3 = u2 + 1; u3 <= 11; ++u3) {
          if (u3 == bass) continue;
          std::array<Csd, 3> three{u1, u2, u3};
          vocab.push_back(Csdc::make(bass, std::span<const Csd>(three.data(), 3)));
        }
      }
    }
  }
  std::sort(vocab.begin(), vocab.end());
  return vocab;
}

Csdc build_csdc(const Slice& slice, const KeySegment& key) {
  if (slice.sounding.empty()) throw ArgumentError("cannot encode an empty slice");
  int lowest = slice.sounding.front().second;
  for (const auto& [part, pitch] : slice.sounding) lowest = std::min(lowest, pitch);
  Csd bass = map_to_csd(lowest, key.tonic);
  std::vector<Csd> uppers;
  uppers.reserve(slice.sounding.size());
  for (const auto& [part, pitch] : slice.sounding) {
    if (pitch == lowest) continue;
    uppers.push_back(map_to_csd(pitch, key.tonic));
  }
  return Csdc::make(bass, uppers);
}

std::vector<ChordEvent> encode_movement(const Movement& movement) {
  std::vector<ChordEvent> events;
  auto slices = full_expansion(movement);
  events.reserve(slices.size());
  for (const auto& slice : slices) {
    const KeySegment& key = movement.key_at(slice.onset);
    ChordEvent ev;
    ev.csdc = build_csdc(slice, key);
    ev.onset = slice.onset;
    ev.duration = slice.duration;
    ev.mode = key.mode;
    ev.in_pivot = movement.in_pivot(slice.onset);
    ev.movement_id = movement.id;
    events.push_back(std::move(ev));
  }
  return events;
}

EncodedCorpus encode_corpus(const std::vector<Movement>& corpus, int threads) {
  EncodedCorpus encoded(corpus.size());
  if (threads <= 0) threads = omp_get_max_threads();
  std::exception_ptr error;
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(corpus.size()); ++i) {
    try {
      auto& slot = encoded[static_cast<std::size_t>(i)];
      slot.id = corpus[static_cast<std::size_t>(i)].id;
      slot.events = encode_movement(corpus[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return encoded;
}

std::vector<Csdc> csdc_sequence(const EncodedMovement& movement) {
  std::vector<Csdc> seq;
  seq.reserve(movement.events.size());
  for (const auto& ev : movement.events) seq.push_back(ev.csdc);
  return seq;
}

UnigramDistribution unigram_distribution(const EncodedCorpus& corpus,
                                         const UnigramOptions& options) {
  if (options.min_distinct < 1 || options.min_distinct > 4) {
    throw ArgumentError("min_distinct must be in 1..4");
  }
  UnigramDistribution dist;
  std::map<Csdc, double> weights;
  for (const auto& movement : corpus) {
    for (const auto& ev : movement.events) {
      bool mode_ok = options.mode == ModeFilter::both ||
                     (options.mode == ModeFilter::major && ev.mode == Mode::major) ||
                     (options.mode == ModeFilter::minor && ev.mode == Mode::minor);
      bool keep = mode_ok && ev.distinct_degree_count() >= options.min_distinct &&
                  !(options.exclude_pivots && ev.in_pivot);
      if (!keep) {
        ++dist.dropped;
        continue;
      }
      ++dist.retained;
      double w = options.weight == WeightScheme::duration ? rat_double(ev.duration) : 1.0;
      weights[ev.csdc] += w;
    }
  }
  if (dist.retained == 0) return dist;  // explicit empty distribution

  double total = 0.0;
  for (const auto& [csdc, w] : weights) total += w;
  for (const auto& [csdc, w] : weights) dist.proportions[csdc] = w / total;
  return dist;
}

void write_unigrams_csv(std::ostream& out, const UnigramDistribution& dist) {
  out << "csdc,proportion\n";
  // Most frequent first; ties in canonical token order.
  std::vector<std::pair<Csdc, double>> rows(dist.proportions.begin(),
                                            dist.proportions.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [csdc, p] : rows) {
    out << csv_quote(csdc.str()) << ',' << fmt_fixed(p, 9) << "\n";
  }
}

}  // namespace harmgram
