#pragma once

#include <string>
#include <vector>

#include "causetlab/growth.hpp"
#include "causetlab/poset.hpp"
#include "causetlab/rational.hpp"

namespace causetlab {

// A label constraint for one slot of a basic event: either a half-open
// interval [lo, hi) with exact rational endpoints inside [0,1], or a single
// prescribed label value.  Membership tests against double labels are exact
// (rational-vs-double comparison, no rounding).
struct LabelBin {
  enum class Kind { interval, atom };
  Kind kind = Kind::interval;
  Rational lo{0}, hi{1};  // interval only
  double atom = 0.0;      // atom only

  static LabelBin interval(const Rational& lo, const Rational& hi);
  static LabelBin atom_of(double label);
  bool contains(double x) const;
  Rational width() const;  // interval length; 0 for an atom
  std::string str() const;

  friend bool operator==(const LabelBin& x, const LabelBin& y) {
    if (x.kind != y.kind) return false;
    if (x.kind == Kind::atom) return x.atom == y.atom;
    return x.lo == y.lo && x.hi == y.hi;
  }
};

// The cylinder event "the first k elements have labels in B_1..B_k (in order
// of appearance) and realize exactly this suborder of [k]".
struct BasicEvent {
  std::vector<LabelBin> bins;
  FinitePoset order;  // standard suborder on {0..k-1}, no labels

  int k() const { return order.n; }
  // Validates shape: bins.size()==order.n, order standard, unlabeled.
  void validate() const;
  // Membership of a growth history with at least k elements.
  bool contains(const OmegaPrefix& omega) const;
  std::string str() const;

  friend bool operator==(const BasicEvent& x, const BasicEvent& y) {
    return x.bins == y.bins && x.order == y.order;
  }
};

// Relabeled event: slot i takes bin B_{lambda(i)} and the image order
// (i <' j iff lambda(i) < lambda(j)).  lambda must be a permutation of [k];
// the result is a basic event again exactly when lambda is a linear
// extension of the original order.
BasicEvent permuted_event(const BasicEvent& e, const std::vector<int>& lambda);

// All partial orders on {0..k-1} for which 0,1,..,k-1 is a linear extension.
// Counts for k = 1..6: 1, 2, 7, 40, 357, 4824.
std::vector<FinitePoset> standard_suborders(int k);

// Every standard suborder of [k] for k in [k_min, k_max], crossed with all
// assignments of dyadic bins [c/denom, (c+1)/denom).  denom must be a power
// of two.
std::vector<BasicEvent> dyadic_event_battery(int k_min, int k_max, int denom);

// One atom-bin event per reachable stem of an atomic kernel, for each depth
// in [1, k_max]: the event pins the exact label sequence and realized order.
std::vector<BasicEvent> stem_event_battery(const GrowthKernel& kernel, int k_max,
                                           std::size_t cap = 100000);

// Exact probability that independent uniform(0,1) labels land in the bins
// (product of interval widths; atoms contribute 0).
Rational product_bin_measure(const BasicEvent& e);

}  // namespace causetlab
