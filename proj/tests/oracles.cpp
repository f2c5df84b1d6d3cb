#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

namespace harmgram::oracle {

using BigRat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

std::vector<SliceSketch> slices_by_containment(const Movement& movement) {
  std::set<Rat> onsets;
  for (const auto& n : movement.notes) onsets.insert(n.onset);
  std::vector<SliceSketch> out;
  for (const Rat& o : onsets) {
    SliceSketch sketch;
    sketch.onset = o;
    for (const auto& n : movement.notes) {
      if (n.onset <= o && o < n.onset + n.duration) {
        sketch.sounding.emplace_back(n.part, n.pitch);
      }
    }
    std::sort(sketch.sounding.begin(), sketch.sounding.end());
    out.push_back(std::move(sketch));
  }
  return out;
}

std::map<NGramType, std::uint64_t> skipgrams_by_bitmask(const std::vector<Csdc>& seq,
                                                        int n, int t) {
  const int k = static_cast<int>(seq.size());
  std::map<NGramType, std::uint64_t> counts;
  if (k > 24) throw std::logic_error("bitmask oracle limited to short sequences");
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    if (std::popcount(mask) != n) continue;
    std::vector<int> idx;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    int skips = 0;
    for (std::size_t s = 1; s < idx.size(); ++s) skips += idx[s] - idx[s - 1] - 1;
    if (skips > t) continue;
    NGramType type;
    for (int i : idx) type.members.push_back(seq[static_cast<std::size_t>(i)]);
    ++counts[type];
  }
  return counts;
}

std::uint64_t skipgram_token_count(const std::vector<Csdc>& seq, int n, int t) {
  std::uint64_t total = 0;
  for (const auto& [type, count] : skipgrams_by_bitmask(seq, n, t)) total += count;
  return total;
}

RationalCubic cubic_by_rational_normal_equations(const std::vector<std::uint64_t>& counts) {
  const int points = static_cast<int>(counts.size());
  // X^T X beta = X^T y with exact arithmetic throughout.
  BigRat m[4][5];
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      BigRat sum = 0;
      for (int t = 0; t < points; ++t) {
        BigInt power = 1;
        for (int p = 0; p < r + c; ++p) power *= t;
        sum += BigRat(power);
      }
      m[r][c] = sum;
    }
    BigRat rhs = 0;
    for (int t = 0; t < points; ++t) {
      BigInt power = 1;
      for (int p = 0; p < r; ++p) power *= t;
      rhs += BigRat(power * BigInt(counts[static_cast<std::size_t>(t)]));
    }
    m[r][4] = rhs;
  }
  // The moment matrix of >= 4 distinct abscissae is positive definite, so
  // elimination never meets a zero pivot.
  for (int col = 0; col < 4; ++col) {
    for (int row = col + 1; row < 4; ++row) {
      BigRat factor = m[row][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[row][c] -= factor * m[col][c];
    }
  }
  BigRat x[4];
  for (int row = 3; row >= 0; --row) {
    BigRat sum = m[row][4];
    for (int c = row + 1; c < 4; ++c) sum -= m[row][c] * x[c];
    x[row] = sum / m[row][row];
  }
  auto to_double = [](const BigRat& r) { return r.convert_to<double>(); };
  return RationalCubic{to_double(x[3]), to_double(x[2]), to_double(x[1]), to_double(x[0])};
}

namespace {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * BigInt(n - k + i) / BigInt(i);
  }
  return result;
}

}  // namespace

double fisher_by_rational_enumeration(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                      std::uint64_t d) {
  const std::uint64_t total = a + b + c + d;
  const std::uint64_t r1 = a + b;
  const std::uint64_t c1 = a + c;
  const BigInt denom = binomial(total, c1);

  auto point = [&](std::uint64_t x) {
    return BigRat(binomial(r1, x) * binomial(total - r1, c1 - x), denom);
  };

  const std::uint64_t x_lo = c1 > total - r1 ? c1 - (total - r1) : 0;
  const std::uint64_t x_hi = std::min(r1, c1);
  const BigRat observed = point(a);
  BigRat p = 0;
  for (std::uint64_t x = x_lo; x <= x_hi; ++x) {
    BigRat px = point(x);
    if (px <= observed) p += px;
  }
  return p.convert_to<double>();
}

std::vector<ReductionLink> reduce_by_simulation(const std::vector<double>& forces) {
  std::vector<int> alive(forces.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);

  std::vector<ReductionLink> links;
  int step = 1;
  while (alive.size() > 1) {
    std::size_t weakest_pos = 0;
    for (std::size_t pos = 1; pos < alive.size(); ++pos) {
      if (forces[static_cast<std::size_t>(alive[pos])] <
          forces[static_cast<std::size_t>(alive[weakest_pos])]) {
        weakest_pos = pos;
      }
    }
    int parent;
    if (weakest_pos == 0) {
      parent = alive[1];
    } else if (weakest_pos + 1 == alive.size()) {
      parent = alive[weakest_pos - 1];
    } else {
      const int left = alive[weakest_pos - 1];
      const int right = alive[weakest_pos + 1];
      parent = forces[static_cast<std::size_t>(right)] >
                       forces[static_cast<std::size_t>(left)]
                   ? right
                   : left;
    }
    links.push_back({alive[weakest_pos], parent, step++});
    alive.erase(alive.begin() + static_cast<long>(weakest_pos));
  }
  return links;
}

}  // namespace harmgram::oracle
