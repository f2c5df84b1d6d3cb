#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "harmgram/association.hpp"
#include "harmgram/encoding.hpp"

namespace harmgram {

// Attractional force per chord token; chords never seen in the ranking get
// the fallback (weaker than anything observed by default).
struct ForceRanking {
  std::map<Csdc, double> force;
  double fallback = -1.0;

  double at(Csdc csdc) const {
    auto it = force.find(csdc);
    return it == force.end() ? fallback : it->second;
  }
};

enum class ForceSource : std::uint8_t {
  combined,     // n_attractor, with sum_asym refining ties
  n_attractor,
  sum_asym,
  pct_attractor,
};

ForceRanking make_force_ranking(const std::vector<AttractorStats>& stats,
                                ForceSource source = ForceSource::combined);

// One assimilation: at `step`, leaf `removed` was linked under `parent`.
struct ReductionLink {
  int removed = 0;
  int parent = 0;
  int step = 0;

  bool operator==(const ReductionLink&) const = default;
};

// Binary linking structure over a chord sequence: k - 1 links for k leaves,
// recorded in removal order. Slicing the links replays any reduction level.
struct ReductionTree {
  std::vector<ChordEvent> leaves;
  std::vector<ReductionLink> links;
  int root = 0;
};

// Iteratively links the surviving chord with the least force (ties: the
// earliest) to whichever surviving neighbor has the greater force (ties: the
// left; at the ends: the only neighbor), then removes it, until one chord
// remains.
ReductionTree reduce(std::span<const ChordEvent> sequence, const ForceRanking& forces);

// The subsequence surviving after (k - survivors) removal steps, in
// original temporal order.
std::vector<ChordEvent> reduction_level(const ReductionTree& tree, int survivors);

enum class TreeFormat : std::uint8_t { dot, text };

std::string export_tree(const ReductionTree& tree, TreeFormat format);
void export_tree_dot(const ReductionTree& tree, std::ostream& out);
void export_tree_text(const ReductionTree& tree, std::ostream& out);

// CSV of one reduction level: movement,survivors,position,onset,csdc.
void write_reduction_csv(std::ostream& out, const std::string& movement_id,
                         const ReductionTree& tree, int survivors);

}  // namespace harmgram
