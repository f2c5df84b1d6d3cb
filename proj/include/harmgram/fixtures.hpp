#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "harmgram/corpus.hpp"

namespace harmgram {

// Deterministic splitmix64 stream. The standard distributions are not
// pinned across library implementations, so fixtures roll their own draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

  bool chance(double p) {
    return (static_cast<double>(next() >> 11) * 0x1.0p-53) < p;
  }

 private:
  std::uint64_t state_;
};

struct FixtureConfig {
  int movements = 10;
  int slices_per_movement = 200;
  int parts = 4;
  std::uint64_t seed = 42;
};

// Synthetic movements with a plausible harmonic skeleton: progression-driven
// chords, held upper voices across onsets, occasional thin textures, and a
// modulation with a pivot span in about half of the movements.
std::vector<Movement> generate_fixture_corpus(const FixtureConfig& config);

// Writes one note/key TSV pair per movement plus a manifest.tsv naming them
// all; returns the manifest path.
std::string write_fixture_corpus(const FixtureConfig& config, const std::string& dir);

}  // namespace harmgram
