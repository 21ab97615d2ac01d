#include "causetlab/events.hpp"

#include <sstream>
#include <stdexcept>

namespace causetlab {

LabelBin LabelBin::interval(const Rational& lo, const Rational& hi) {
  LabelBin b;
  b.kind = Kind::interval;
  b.lo = lo;
  b.hi = hi;
  // Canonical form keeps equality and ordering exact for any caller input.
  b.lo.canonicalize();
  b.hi.canonicalize();
  if (b.lo < 0 || b.hi > 1 || !(b.lo < b.hi))
    throw std::invalid_argument("LabelBin: need 0 <= lo < hi <= 1");
  return b;
}

LabelBin LabelBin::atom_of(double label) {
  LabelBin b;
  b.kind = Kind::atom;
  b.atom = label;
  return b;
}

bool LabelBin::contains(double x) const {
  if (kind == Kind::atom) return x == atom;
  return cmp_rational_double(lo, x) <= 0 && cmp_rational_double(hi, x) > 0;
}

Rational LabelBin::width() const {
  if (kind == Kind::atom) return Rational(0);
  return hi - lo;
}

std::string LabelBin::str() const {
  if (kind == Kind::atom) {
    std::ostringstream os;
    os << "{" << atom << "}";
    return os.str();
  }
  return "[" + rational_str(lo) + "," + rational_str(hi) + ")";
}

void BasicEvent::validate() const {
  if (order.n <= 0) throw std::invalid_argument("BasicEvent: empty order");
  if (static_cast<int>(bins.size()) != order.n)
    throw std::invalid_argument("BasicEvent: bins/order size mismatch");
  if (order.has_labels()) throw std::invalid_argument("BasicEvent: order must be unlabeled");
  if (!order.is_standard_suborder())
    throw std::invalid_argument("BasicEvent: order must be a standard suborder");
}

bool BasicEvent::contains(const OmegaPrefix& omega) const {
  const int m = k();
  if (static_cast<int>(omega.size()) < m)
    throw std::invalid_argument("BasicEvent::contains: history shorter than event");
  for (int i = 0; i < m; ++i)
    if (!bins[static_cast<std::size_t>(i)].contains(omega.labels[static_cast<std::size_t>(i)]))
      return false;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (omega.less(i, j) != order.less(i, j)) return false;
  return true;
}

std::string BasicEvent::str() const {
  std::ostringstream os;
  os << "E(";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (i) os << " ";
    os << bins[i].str();
  }
  os << "; ";
  bool first = true;
  for (int i = 0; i < order.n; ++i)
    for (int j = i + 1; j < order.n; ++j)
      if (order.less(i, j)) {
        if (!first) os << ",";
        os << (i + 1) << "<" << (j + 1);
        first = false;
      }
  if (first) os << "antichain";
  os << ")";
  return os.str();
}

BasicEvent permuted_event(const BasicEvent& e, const std::vector<int>& lambda) {
  const int m = e.k();
  if (static_cast<int>(lambda.size()) != m)
    throw std::invalid_argument("permuted_event: permutation size mismatch");
  BasicEvent out;
  out.order = apply_permutation(e.order, lambda);
  out.bins.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    out.bins[static_cast<std::size_t>(i)] = e.bins[static_cast<std::size_t>(lambda[static_cast<std::size_t>(i)])];
  return out;
}

std::vector<FinitePoset> standard_suborders(int k) {
  if (k <= 0 || k > 8) throw std::invalid_argument("standard_suborders: k in [1,8]");
  // Grow element by element; the new element's strict down-set may be any
  // down-set of the current order, which keeps 0..k-1 a linear extension and
  // produces each standard suborder exactly once.
  std::vector<FinitePoset> acc{FinitePoset::antichain(1)};
  for (int m = 2; m <= k; ++m) {
    std::vector<FinitePoset> next;
    for (const auto& p : acc) {
      for (Mask d : enumerate_down_sets(p)) {
        FinitePoset q = FinitePoset::antichain(m);
        for (int i = 0; i < p.n; ++i) {
          q.below[i] = p.below[i];
          q.above[i] = p.above[i];
          if ((d >> i) & 1u) {
            q.below[m - 1] |= (Mask(1) << i) | p.below[i];
          }
        }
        Mask dn = q.below[m - 1];
        while (dn) {
          const int x = lowest_bit(dn);
          dn &= dn - 1;
          q.above[x] |= Mask(1) << (m - 1);
        }
        next.push_back(q);
      }
    }
    acc.swap(next);
  }
  return acc;
}

std::vector<BasicEvent> dyadic_event_battery(int k_min, int k_max, int denom) {
  if (k_min < 1 || k_max < k_min || k_max > 4)
    throw std::invalid_argument("dyadic_event_battery: need 1 <= k_min <= k_max <= 4");
  if (denom < 1 || denom > 256 || (denom & (denom - 1)) != 0)
    throw std::invalid_argument("dyadic_event_battery: denom must be a power of two <= 256");
  std::vector<LabelBin> cells;
  for (int c = 0; c < denom; ++c)
    cells.push_back(LabelBin::interval(Rational(c, denom), Rational(c + 1, denom)));
  std::vector<BasicEvent> out;
  for (int k = k_min; k <= k_max; ++k) {
    const auto orders = standard_suborders(k);
    std::vector<int> choice(static_cast<std::size_t>(k), 0);
    for (const auto& ord : orders) {
      choice.assign(static_cast<std::size_t>(k), 0);
      while (true) {
        BasicEvent e;
        e.order = ord;
        for (int i = 0; i < k; ++i)
          e.bins.push_back(cells[static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])]);
        out.push_back(std::move(e));
        int pos = k - 1;
        while (pos >= 0 && choice[static_cast<std::size_t>(pos)] == denom - 1) {
          choice[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
        ++choice[static_cast<std::size_t>(pos)];
      }
    }
  }
  return out;
}

std::vector<BasicEvent> stem_event_battery(const GrowthKernel& kernel, int k_max,
                                           std::size_t cap) {
  std::vector<BasicEvent> out;
  for (int k = 1; k <= k_max; ++k) {
    for (const auto& stem : enumerate_stems(kernel, k, cap)) {
      BasicEvent e;
      e.order = stem.omega.prefix_order(k);
      e.order.labels.clear();
      for (int i = 0; i < k; ++i)
        e.bins.push_back(LabelBin::atom_of(stem.omega.labels[static_cast<std::size_t>(i)]));
      out.push_back(std::move(e));
    }
  }
  return out;
}

Rational product_bin_measure(const BasicEvent& e) {
  Rational m(1);
  for (const auto& b : e.bins) m *= b.width();
  return m;
}

}  // namespace causetlab
