#include "harmgram/fixtures.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "harmgram/errors.hpp"

namespace harmgram {

namespace {

struct Harmony {
  int bass;                  // scale degree of the bass
  std::array<int, 3> upper;  // scale degrees of the upper voices, -1 = unused
};

// A small diatonic palette; indices double as Markov states.
constexpr std::array<Harmony, 10> kPalette{{
    {0, {4, 7, -1}},    // tonic, root position
    {4, {0, 7, -1}},    // tonic, first inversion
    {7, {0, 4, -1}},    // tonic six-four
    {7, {2, 11, -1}},   // dominant triad
    {7, {2, 5, 11}},    // dominant seventh
    {11, {2, 5, 7}},    // dominant seventh, first inversion
    {5, {0, 9, -1}},    // subdominant
    {5, {2, 9, -1}},    // supertonic sixth
    {9, {0, 4, -1}},    // submediant
    {2, {5, 11, -1}},   // leading-tone flavored passing chord
}};

// Preferred continuations per palette index; drawing from these keeps the
// dominant-to-tonic pull that the association statistics look for.
constexpr std::array<std::array<int, 4>, 10> kNextStates{{
    {6, 7, 3, 1},  // from tonic: move to predominants or dominant
    {6, 7, 4, 0},
    {4, 3, 4, 3},  // six-four resolves to the dominant
    {0, 0, 4, 8},
    {0, 0, 1, 0},  // seventh resolves to tonic
    {0, 1, 0, 0},
    {2, 3, 0, 7},
    {2, 4, 3, 3},
    {7, 6, 3, 1},
    {0, 1, 0, 4},
}};

int degree_pitch(int tonic, int degree, int octave) {
  return octave * 12 + (tonic + degree) % 12;
}

Movement generate_movement(Rng& rng, const FixtureConfig& config, int index) {
  Movement movement;
  char id[32];
  std::snprintf(id, sizeof(id), "mvt_%02d", index);
  movement.id = id;
  movement.part_count = config.parts;

  const int tonic1 = rng.below(12);
  const Mode mode1 = rng.chance(0.75) ? Mode::major : Mode::minor;
  const bool modulates = rng.chance(0.5) && config.slices_per_movement >= 24;
  const int tonic2 = (tonic1 + (rng.chance(0.7) ? 7 : 5)) % 12;
  const Mode mode2 = rng.chance(0.8) ? mode1 : Mode::minor;

  const int slots = std::max(1, config.slices_per_movement);
  const int boundary_slot = modulates ? slots * 11 / 20 : slots;

  std::vector<Rat> slot_onsets(static_cast<std::size_t>(slots) + 1);
  Rat cursor{0};
  int state = 0;
  // Pitch currently held per part; -1 means the previous note ended.
  std::vector<int> held(static_cast<std::size_t>(config.parts), -1);

  for (int slot = 0; slot < slots; ++slot) {
    slot_onsets[static_cast<std::size_t>(slot)] = cursor;
    const Rat duration = rng.chance(0.4) ? Rat(1) : Rat(1, 2);
    const int tonic = slot < boundary_slot ? tonic1 : tonic2;

    if (!rng.chance(0.3)) {
      state = kNextStates[static_cast<std::size_t>(state)][static_cast<std::size_t>(
          rng.below(4))];
    }
    const Harmony& harmony = kPalette[static_cast<std::size_t>(state)];

    // Part 0 re-attacks every slot, so every slot opens a slice.
    const int bass_pitch = degree_pitch(tonic, harmony.bass, 3);
    movement.notes.push_back({cursor, duration, bass_pitch, 0});
    held[0] = -1;

    const bool thin = rng.chance(0.12);       // drop to one or two voices
    const bool monophonic = rng.chance(0.08); // bass alone
    for (int part = 1; part < config.parts; ++part) {
      if (monophonic) {
        held[static_cast<std::size_t>(part)] = -1;
        continue;
      }
      if (thin && part >= 2) {
        held[static_cast<std::size_t>(part)] = -1;
        continue;
      }
      // Hold the previous note through this onset about a quarter of the time.
      if (held[static_cast<std::size_t>(part)] >= 0 && rng.chance(0.25)) {
        auto& note = movement.notes[static_cast<std::size_t>(
            held[static_cast<std::size_t>(part)])];
        note.duration += duration;
        continue;
      }
      const int degree = harmony.upper[static_cast<std::size_t>((part - 1) % 3)];
      if (degree < 0 && part >= 2) {
        held[static_cast<std::size_t>(part)] = -1;
        continue;
      }
      const int use_degree = degree < 0 ? harmony.upper[0] : degree;
      const int octave = 5 + (part == 3 && rng.chance(0.5) ? 1 : 0);
      movement.notes.push_back(
          {cursor, duration, degree_pitch(tonic, use_degree, octave), part});
      held[static_cast<std::size_t>(part)] =
          static_cast<int>(movement.notes.size()) - 1;
    }

    cursor += duration;
  }
  slot_onsets[static_cast<std::size_t>(slots)] = cursor;

  if (modulates) {
    const Rat boundary = slot_onsets[static_cast<std::size_t>(boundary_slot)];
    movement.keys.push_back({Rat(0), boundary, tonic1, mode1, false});
    movement.keys.push_back({boundary, cursor, tonic2, mode2, false});
    // Pivot span straddling the boundary by a couple of onsets each way.
    const int lo = std::max(0, boundary_slot - 2);
    const int hi = std::min(slots, boundary_slot + 2);
    movement.keys.push_back({slot_onsets[static_cast<std::size_t>(lo)],
                             slot_onsets[static_cast<std::size_t>(hi)], tonic1, mode1,
                             true});
  } else {
    movement.keys.push_back({Rat(0), cursor, tonic1, mode1, false});
  }

  std::sort(movement.notes.begin(), movement.notes.end(),
            [](const NoteEvent& a, const NoteEvent& b) {
              return std::tie(a.onset, a.part, a.pitch, a.duration) <
                     std::tie(b.onset, b.part, b.pitch, b.duration);
            });
  std::sort(movement.keys.begin(), movement.keys.end(),
            [](const KeySegment& a, const KeySegment& b) {
              return std::tie(a.start, a.end, a.is_pivot) <
                     std::tie(b.start, b.end, b.is_pivot);
            });
  return movement;
}

}  // namespace

std::vector<Movement> generate_fixture_corpus(const FixtureConfig& config) {
  if (config.movements < 1) throw ArgumentError("fixture corpus needs >= 1 movement");
  if (config.parts < 1 || config.parts > 4) {
    throw ArgumentError("fixture parts must be in 1..4");
  }
  std::vector<Movement> corpus;
  corpus.reserve(static_cast<std::size_t>(config.movements));
  for (int i = 0; i < config.movements; ++i) {
    // One independent stream per movement keeps corpora stable when only
    // the movement count changes.
    Rng rng(config.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(i));
    corpus.push_back(generate_movement(rng, config, i));
  }
  return corpus;
}

std::string write_fixture_corpus(const FixtureConfig& config, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto corpus = generate_fixture_corpus(config);

  const fs::path base(dir);
  std::ofstream manifest(base / "manifest.tsv");
  if (!manifest) throw Error("cannot write manifest in " + dir);
  for (const auto& movement : corpus) {
    const std::string note_name = movement.id + ".tsv";
    const std::string key_name = movement.id + ".keys.tsv";
    std::ofstream notes(base / note_name);
    std::ofstream keys(base / key_name);
    if (!notes || !keys) throw Error("cannot write fixture files in " + dir);
    serialize_movement(movement, notes, keys);
    manifest << note_name << '\t' << key_name << "\n";
  }
  return (base / "manifest.tsv").string();
}

}  // namespace harmgram
