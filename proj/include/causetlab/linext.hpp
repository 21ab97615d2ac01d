#pragma once

#include <stdexcept>
#include <vector>

#include "causetlab/lattice.hpp"
#include "causetlab/poset.hpp"
#include "causetlab/rational.hpp"
#include "causetlab/rng.hpp"

namespace causetlab {

// Exact linear-extension machinery.  Everything here is deterministic and
// exact: counts are big integers, probabilities big rationals.

// e(P); e(empty) = 1.
BigInt count_extensions(const FinitePoset& p, std::size_t budget = kDefaultLatticeBudget);

struct ExtensionCapExceeded : std::runtime_error {
  BigInt count;
  explicit ExtensionCapExceeded(BigInt c)
      : std::runtime_error("extension enumeration cap exceeded; exact count = " + c.get_str()),
        count(std::move(c)) {}
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// All linear extensions in lexicographic order (as element sequences).
// Throws ExtensionCapExceeded (carrying the exact count) when e(P) > cap.
std::vector<std::vector<int>> enumerate_extensions(const FinitePoset& p,
                                                   std::size_t cap = kDefaultEnumerationCap);

// Exactly uniform draw: at each step an addable element x is chosen with
// probability e(extensions of the remainder after x) / e(remainder), using
// unbiased integer draws — no floating point is involved.
std::vector<int> sample_uniform_extension(const FinitePoset& p, Rng& rng,
                                          std::size_t budget = kDefaultLatticeBudget);

// P(uniform extension starts with x); 0 when x is not minimal.
Rational bottom_probability(const FinitePoset& p, int x);

// P(uniform extension begins with exactly this sequence); 0 when the
// sequence is not an initial segment of any extension.
Rational stem_probability(const FinitePoset& p, const std::vector<int>& prefix);

// r[x][i] = P(x lands at position i+1); rows and columns each sum to 1.
std::vector<std::vector<Rational>> position_distribution(const FinitePoset& p);

// P(x within the bottom k positions) = sum_{i<=k} r_i(x).
Rational prefix_membership_probability(const FinitePoset& p, int x, int k);

// P(the first k elements all lie inside `allowed`).
Rational downset_prefix_probability(const FinitePoset& p, Mask allowed, int k);

// P(every element of `required` lies within the first k positions).
Rational containment_probability(const FinitePoset& p, Mask required, int k);

}  // namespace causetlab
