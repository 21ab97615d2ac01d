#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causetlab {

// Element-set bitmask over a small ground set.
using Mask = std::uint32_t;

// Hard cap for the bit-matrix poset representation and every lattice walk
// built on it.  CAUSETLAB_MAX_N may lower (never raise) the effective cap.
inline constexpr int kMaxPosetN = 22;

int max_poset_n();

inline int popcount(Mask m) { return __builtin_popcount(m); }
inline int lowest_bit(Mask m) { return __builtin_ctz(m); }

// A finite partial order on elements 0..n-1, stored transitively closed as
// per-element strict down-set / up-set bit rows.  Optionally carries distinct
// real labels in [0,1].  Instances are value types; all operations on them
// are pure.
struct FinitePoset {
  int n = 0;
  std::array<Mask, kMaxPosetN> below{};  // below[i] = { j : j < i }
  std::array<Mask, kMaxPosetN> above{};  // above[i] = { j : i < j }
  std::vector<double> labels;            // empty, or exactly n distinct values

  bool less(int i, int j) const { return (above[i] >> j) & 1u; }
  bool comparable(int i, int j) const { return i != j && (less(i, j) || less(j, i)); }
  Mask all_mask() const { return n == 0 ? 0 : (n == 32 ? ~Mask(0) : ((Mask(1) << n) - 1)); }
  bool has_labels() const { return !labels.empty(); }

  // Builds from strict relations i<j, closing transitively.  Throws
  // std::invalid_argument on a cycle or an out-of-range index.
  static FinitePoset from_relations(int n, const std::vector<std::pair<int, int>>& less_pairs);
  static FinitePoset antichain(int n);
  static FinitePoset chain(int n);

  // Subposet induced on the elements of `keep`, reindexed in increasing
  // element order (labels carried along when present).
  FinitePoset induced(Mask keep) const;

  // True when the identity enumeration 0,1,...,n-1 is a linear extension.
  bool is_standard_suborder() const;

  Mask down_closure(Mask s) const;
  Mask up_closure(Mask s) const;
  bool is_down_set(Mask s) const { return down_closure(s) == s; }

  // Minimal elements of P minus `removed`; `removed` must be a down-set.
  std::vector<int> minimal_elements(Mask removed = 0) const;
  std::vector<int> maximal_elements(Mask within) const;

  friend bool operator==(const FinitePoset& x, const FinitePoset& y) {
    if (x.n != y.n || x.labels != y.labels) return false;
    for (int i = 0; i < x.n; ++i)
      if (x.below[i] != y.below[i]) return false;
    return true;
  }
};

struct CoverInfo {
  std::vector<std::pair<int, int>> covers;  // (i,j) with i covered by j
  long long c = 0;                          // number of covering pairs
  long long b = 0;                          // number of incomparable pairs
};

CoverInfo covering_pairs(const FinitePoset& p);

// Image order under a bijection lambda of [n]: i <' j iff lambda(i) < lambda(j)
// in p.  Labels follow the bijection: labels'[i] = labels[lambda(i)].
FinitePoset apply_permutation(const FinitePoset& p, const std::vector<int>& lambda);

// Thrown when a down-set lattice walk would exceed its entry budget; `seen`
// is the number of down-sets enumerated before giving up (a lower bound on
// the lattice size).
struct LatticeOverflow : std::runtime_error {
  std::size_t seen;
  explicit LatticeOverflow(std::size_t seen_)
      : std::runtime_error("down-set lattice exceeds budget (saw " + std::to_string(seen_) +
                           " down-sets)"),
        seen(seen_) {}
};

inline constexpr std::size_t kDefaultLatticeBudget = std::size_t(1) << 22;

// All down-sets, ordered by size then by mask value.
std::vector<Mask> enumerate_down_sets(const FinitePoset& p,
                                      std::size_t budget = kDefaultLatticeBudget);

// Isomorphism-invariant code (n <= 9): the minimum relation-matrix encoding
// over all relabelings of p by its own linear extensions.  Two posets are
// isomorphic iff their codes and sizes agree.
std::uint64_t canonical_code(const FinitePoset& p);

// Text form:
//   n=<int>
//   i<j          (1-based, one relation per line; covers suffice)
//   label i <v>  (optional)
// '#' starts a comment.  parse_poset_text throws std::invalid_argument with a
// line-precise message on malformed input.
FinitePoset parse_poset_text(const std::string& text);
std::string poset_to_text(const FinitePoset& p);

}  // namespace causetlab
