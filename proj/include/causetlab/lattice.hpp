#pragma once

#include <algorithm>
#include <cstdint>

#include "causetlab/poset.hpp"
#include "causetlab/rational.hpp"

namespace causetlab {

// Largest n for which every linear-extension count fits in uint64 (n! does).
inline constexpr int kU64SafeN = 20;

// Dynamic programs over the down-set lattice of a finite poset.
//
//   fwd[D] = number of linear extensions of the order induced on D
//            (equivalently, the number of ways to reach D as a growth prefix)
//   bwd[D] = number of linear extensions of P \ D
//
// fwd[full] = bwd[empty] = e(P).  Counts are exact in CountT; use uint64 only
// when n <= kU64SafeN.
template <class CountT>
struct LatticeTable {
  FinitePoset p;
  std::vector<Mask> downsets;  // BFS order: by size, then by mask
  std::vector<CountT> fwd, bwd;

  std::size_t index_of(Mask d) const {
    const auto key = std::make_pair(popcount(d), d);
    auto it = std::lower_bound(downsets.begin(), downsets.end(), d,
                               [&](Mask m, Mask value) {
                                 return std::make_pair(popcount(m), m) <
                                        std::make_pair(popcount(value), value);
                               });
    if (it == downsets.end() || *it != d) {
      throw std::invalid_argument("lattice: mask is not a down-set of this poset");
    }
    (void)key;
    return static_cast<std::size_t>(it - downsets.begin());
  }

  const CountT& f(Mask d) const { return fwd[index_of(d)]; }
  const CountT& g(Mask d) const { return bwd[index_of(d)]; }
  const CountT& extensions() const { return bwd[0]; }
};

template <class CountT>
LatticeTable<CountT> build_lattice(const FinitePoset& p,
                                   std::size_t budget = kDefaultLatticeBudget) {
  LatticeTable<CountT> t;
  t.p = p;
  t.downsets = enumerate_down_sets(p, budget);
  const std::size_t L = t.downsets.size();
  t.fwd.assign(L, CountT(0));
  t.bwd.assign(L, CountT(0));
  t.fwd[0] = CountT(1);
  for (std::size_t i = 1; i < L; ++i) {
    const Mask d = t.downsets[i];
    CountT acc(0);
    Mask m = d;
    while (m) {
      const int x = lowest_bit(m);
      m &= m - 1;
      if (p.above[x] & d) continue;  // x not maximal in d
      acc += t.fwd[t.index_of(d & ~(Mask(1) << x))];
    }
    t.fwd[i] = acc;
  }
  t.bwd[L - 1] = CountT(1);  // full set is last in BFS order
  for (std::size_t i = L - 1; i-- > 0;) {
    const Mask d = t.downsets[i];
    CountT acc(0);
    for (int x = 0; x < p.n; ++x) {
      if ((d >> x) & 1u) continue;
      if (p.below[x] & ~d) continue;  // x not minimal in the complement
      acc += t.bwd[t.index_of(d | (Mask(1) << x))];
    }
    t.bwd[i] = acc;
  }
  return t;
}

using LatticeU64 = LatticeTable<std::uint64_t>;
using LatticeBig = LatticeTable<BigInt>;

}  // namespace causetlab
