#include "causetlab/linext.hpp"

#include <algorithm>

namespace causetlab {

namespace {

BigInt to_big(const std::uint64_t& v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}
const BigInt& to_big(const BigInt& v) { return v; }

// Runs fn(table) with a uint64 lattice when exact there, else a BigInt one.
template <class Fn>
auto with_lattice(const FinitePoset& p, std::size_t budget, Fn&& fn) {
  if (p.n <= kU64SafeN) {
    return fn(build_lattice<std::uint64_t>(p, budget));
  }
  return fn(build_lattice<BigInt>(p, budget));
}

}  // namespace

BigInt count_extensions(const FinitePoset& p, std::size_t budget) {
  return with_lattice(p, budget, [](const auto& t) { return to_big(t.extensions()); });
}

namespace {

void enum_dfs(const FinitePoset& p, Mask placed, std::vector<int>& seq,
              std::vector<std::vector<int>>& out) {
  if (static_cast<int>(seq.size()) == p.n) {
    out.push_back(seq);
    return;
  }
  for (int x = 0; x < p.n; ++x) {  // ascending: lexicographic output
    if ((placed >> x) & 1u) continue;
    if (p.below[x] & ~placed) continue;
    seq.push_back(x);
    enum_dfs(p, placed | (Mask(1) << x), seq, out);
    seq.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_extensions(const FinitePoset& p, std::size_t cap) {
  BigInt count = count_extensions(p);
  if (count > BigInt(static_cast<unsigned long>(cap))) throw ExtensionCapExceeded(count);
  std::vector<std::vector<int>> out;
  out.reserve(count.get_ui());
  std::vector<int> seq;
  seq.reserve(p.n);
  enum_dfs(p, 0, seq, out);
  return out;
}

namespace {

template <class CountT>
std::vector<int> sample_impl(const LatticeTable<CountT>& t, Rng& rng) {
  const FinitePoset& p = t.p;
  std::vector<int> seq;
  seq.reserve(p.n);
  Mask d = 0;
  while (static_cast<int>(seq.size()) < p.n) {
    // weights: bwd[d | x] over addable x; their sum is bwd[d]
    CountT draw;
    if constexpr (std::is_same_v<CountT, std::uint64_t>) {
      draw = rng.next_below(t.g(d));
    } else {
      draw = uniform_bigint_below(rng, t.g(d));
    }
    int chosen = -1;
    for (int x = 0; x < p.n; ++x) {
      if ((d >> x) & 1u) continue;
      if (p.below[x] & ~d) continue;
      const CountT& w = t.g(d | (Mask(1) << x));
      if (draw < w) {
        chosen = x;
        break;
      }
      draw -= w;
    }
    if (chosen < 0) throw std::logic_error("sample_uniform_extension: weight walk failed");
    seq.push_back(chosen);
    d |= Mask(1) << chosen;
  }
  return seq;
}

}  // namespace

std::vector<int> sample_uniform_extension(const FinitePoset& p, Rng& rng, std::size_t budget) {
  if (p.n <= kU64SafeN) {
    const auto t = build_lattice<std::uint64_t>(p, budget);
    return sample_impl(t, rng);
  }
  const auto t = build_lattice<BigInt>(p, budget);
  return sample_impl(t, rng);
}

Rational bottom_probability(const FinitePoset& p, int x) {
  if (x < 0 || x >= p.n) throw std::invalid_argument("bottom_probability: element out of range");
  if (p.below[x] != 0) return Rational(0);
  return stem_probability(p, {x});
}

Rational stem_probability(const FinitePoset& p, const std::vector<int>& prefix) {
  if (prefix.empty()) return Rational(1);
  if (static_cast<int>(prefix.size()) > p.n) return Rational(0);
  Mask d = 0;
  for (int x : prefix) {
    if (x < 0 || x >= p.n) throw std::invalid_argument("stem_probability: element out of range");
    if ((d >> x) & 1u) return Rational(0);          // repeated element
    if (p.below[x] & ~d) return Rational(0);        // not addable here
    d |= Mask(1) << x;
  }
  return with_lattice(p, kDefaultLatticeBudget, [&](const auto& t) {
    Rational r(to_big(t.g(d)), to_big(t.extensions()));
    r.canonicalize();
    return r;
  });
}

std::vector<std::vector<Rational>> position_distribution(const FinitePoset& p) {
  std::vector<std::vector<Rational>> r(p.n, std::vector<Rational>(p.n, Rational(0)));
  if (p.n == 0) return r;
  with_lattice(p, kDefaultLatticeBudget, [&](const auto& t) {
    const BigInt e = to_big(t.extensions());
    std::vector<BigInt> counts(static_cast<std::size_t>(p.n) * p.n, BigInt(0));
    for (std::size_t i = 0; i < t.downsets.size(); ++i) {
      const Mask d = t.downsets[i];
      const int size = popcount(d);
      for (int x = 0; x < p.n; ++x) {
        if ((d >> x) & 1u) continue;
        if (p.below[x] & ~d) continue;
        counts[static_cast<std::size_t>(x) * p.n + size] +=
            to_big(t.fwd[i]) * to_big(t.g(d | (Mask(1) << x)));
      }
    }
    for (int x = 0; x < p.n; ++x) {
      for (int i = 0; i < p.n; ++i) {
        Rational q(counts[static_cast<std::size_t>(x) * p.n + i], e);
        q.canonicalize();
        r[x][i] = q;
      }
    }
    return 0;
  });
  return r;
}

Rational prefix_membership_probability(const FinitePoset& p, int x, int k) {
  if (x < 0 || x >= p.n) throw std::invalid_argument("prefix_membership: element out of range");
  if (k <= 0) return Rational(0);
  if (k >= p.n) return Rational(1);
  return with_lattice(p, kDefaultLatticeBudget, [&](const auto& t) {
    BigInt num(0);
    for (std::size_t i = 0; i < t.downsets.size(); ++i) {
      const Mask d = t.downsets[i];
      if (popcount(d) >= k) continue;
      if ((d >> x) & 1u) continue;
      if (p.below[x] & ~d) continue;
      num += to_big(t.fwd[i]) * to_big(t.g(d | (Mask(1) << x)));
    }
    Rational q(num, to_big(t.extensions()));
    q.canonicalize();
    return q;
  });
}

Rational downset_prefix_probability(const FinitePoset& p, Mask allowed, int k) {
  if (k <= 0) return Rational(1);
  if (k >= p.n) return (allowed & p.all_mask()) == p.all_mask() ? Rational(1) : Rational(0);
  return with_lattice(p, kDefaultLatticeBudget, [&](const auto& t) {
    BigInt num(0);
    for (std::size_t i = 0; i < t.downsets.size(); ++i) {
      const Mask d = t.downsets[i];
      if (popcount(d) != k) continue;
      if (d & ~allowed) continue;
      num += to_big(t.fwd[i]) * to_big(t.bwd[i]);
    }
    Rational q(num, to_big(t.extensions()));
    q.canonicalize();
    return q;
  });
}

Rational containment_probability(const FinitePoset& p, Mask required, int k) {
  if ((required & p.all_mask()) != required) {
    throw std::invalid_argument("containment_probability: required set out of range");
  }
  if (k >= p.n) return Rational(1);
  if (popcount(required) > k) return Rational(0);
  return with_lattice(p, kDefaultLatticeBudget, [&](const auto& t) {
    BigInt num(0);
    for (std::size_t i = 0; i < t.downsets.size(); ++i) {
      const Mask d = t.downsets[i];
      if (popcount(d) != k) continue;
      if ((d & required) != required) continue;
      num += to_big(t.fwd[i]) * to_big(t.bwd[i]);
    }
    Rational q(num, to_big(t.extensions()));
    q.canonicalize();
    return q;
  });
}

}  // namespace causetlab
