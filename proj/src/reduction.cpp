#include "harmgram/reduction.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "harmgram/csv.hpp"
#include "harmgram/errors.hpp"

namespace harmgram {

ForceRanking make_force_ranking(const std::vector<AttractorStats>& stats,
                                ForceSource source) {
  ForceRanking ranking;
  for (const auto& s : stats) {
    double value = 0;
    switch (source) {
      case ForceSource::combined:
        // sum_asym only refines ties between equal attractor counts; its
        // magnitude is bounded by types_containing, so scale it well below 1.
        value = static_cast<double>(s.n_attractor) +
                s.sum_asym / (4.0 * static_cast<double>(std::max<std::uint64_t>(
                                        1, s.types_containing)));
        break;
      case ForceSource::n_attractor:
        value = static_cast<double>(s.n_attractor);
        break;
      case ForceSource::sum_asym:
        value = s.sum_asym;
        break;
      case ForceSource::pct_attractor:
        value = s.pct_attractor;
        break;
    }
    ranking.force[s.unigram] = value;
  }
  return ranking;
}

ReductionTree reduce(std::span<const ChordEvent> sequence, const ForceRanking& forces) {
  if (sequence.empty()) throw ArgumentError("cannot reduce an empty sequence");
  const int k = static_cast<int>(sequence.size());

  ReductionTree tree;
  tree.leaves.assign(sequence.begin(), sequence.end());
  tree.links.reserve(static_cast<std::size_t>(k) - 1);

  std::vector<double> force(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    force[static_cast<std::size_t>(i)] = forces.at(sequence[static_cast<std::size_t>(i)].csdc);
  }

  // Doubly linked list over surviving indices.
  std::vector<int> prev(static_cast<std::size_t>(k)), next(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    prev[static_cast<std::size_t>(i)] = i - 1;
    next[static_cast<std::size_t>(i)] = i + 1 < k ? i + 1 : -1;
  }
  int head = 0;

  for (int step = 1; step < k; ++step) {
    // Weakest surviving chord; ties go to the earliest index.
    int weakest = head;
    for (int i = next[static_cast<std::size_t>(head)]; i != -1;
         i = next[static_cast<std::size_t>(i)]) {
      if (force[static_cast<std::size_t>(i)] < force[static_cast<std::size_t>(weakest)]) {
        weakest = i;
      }
    }

    const int left = prev[static_cast<std::size_t>(weakest)];
    const int right = next[static_cast<std::size_t>(weakest)];
    int parent;
    if (left == -1) {
      parent = right;
    } else if (right == -1) {
      parent = left;
    } else {
      // Greater force wins; a tie keeps the left neighbor.
      parent = force[static_cast<std::size_t>(right)] > force[static_cast<std::size_t>(left)]
                   ? right
                   : left;
    }
    tree.links.push_back({weakest, parent, step});

    if (left != -1) next[static_cast<std::size_t>(left)] = right;
    if (right != -1) prev[static_cast<std::size_t>(right)] = left;
    if (weakest == head) head = right;
  }
  tree.root = head;
  return tree;
}

std::vector<ChordEvent> reduction_level(const ReductionTree& tree, int survivors) {
  const int k = static_cast<int>(tree.leaves.size());
  if (survivors < 1 || survivors > k) {
    throw ArgumentError("survivors must be in 1.." + std::to_string(k) + ", got " +
                        std::to_string(survivors));
  }
  std::vector<bool> alive(static_cast<std::size_t>(k), true);
  const int steps = k - survivors;
  for (int s = 0; s < steps; ++s) {
    alive[static_cast<std::size_t>(tree.links[static_cast<std::size_t>(s)].removed)] = false;
  }
  std::vector<ChordEvent> out;
  out.reserve(static_cast<std::size_t>(survivors));
  for (int i = 0; i < k; ++i) {
    if (alive[static_cast<std::size_t>(i)]) out.push_back(tree.leaves[static_cast<std::size_t>(i)]);
  }
  return out;
}

void export_tree_dot(const ReductionTree& tree, std::ostream& out) {
  const std::string name = tree.leaves.empty() ? "" : tree.leaves.front().movement_id;
  out << "digraph \"" << name << "\" {\n";
  out << "  rankdir=BT;\n";
  for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
    out << "  n" << i << " [label=\"" << i << ": " << tree.leaves[i].csdc.str()
        << "\"];\n";
  }
  for (const auto& link : tree.links) {
    out << "  n" << link.removed << " -> n" << link.parent << " [label=\"" << link.step
        << "\"];\n";
  }
  out << "}\n";
}

void export_tree_text(const ReductionTree& tree, std::ostream& out) {
  const std::string name = tree.leaves.empty() ? "" : tree.leaves.front().movement_id;
  out << "tree " << name << " leaves=" << tree.leaves.size() << " root=" << tree.root
      << "\n";
  for (const auto& link : tree.links) {
    out << "step " << link.step << ": remove " << link.removed << " -> parent "
        << link.parent << "\n";
  }
}

std::string export_tree(const ReductionTree& tree, TreeFormat format) {
  std::ostringstream out;
  if (format == TreeFormat::dot) {
    export_tree_dot(tree, out);
  } else {
    export_tree_text(tree, out);
  }
  return out.str();
}

void write_reduction_csv(std::ostream& out, const std::string& movement_id,
                         const ReductionTree& tree, int survivors) {
  auto level = reduction_level(tree, survivors);
  for (std::size_t pos = 0; pos < level.size(); ++pos) {
    const auto& ev = level[pos];
    out << csv_quote(movement_id) << ',' << survivors << ',' << pos << ','
        << ev.onset.numerator() << ',' << ev.onset.denominator() << ','
        << csv_quote(ev.csdc.str()) << "\n";
  }
}

}  // namespace harmgram
