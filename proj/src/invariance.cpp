#include "causetlab/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "causetlab/lattice.hpp"
#include "causetlab/mc.hpp"
#include "causetlab/stats.hpp"

namespace causetlab {

namespace {

Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string permutation_str(const std::vector<int>& lambda) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i) os << " ";
    os << lambda[i] + 1;
  }
  os << ")";
  return os.str();
}

std::string stem_str(const StemEntry& stem) {
  std::ostringstream os;
  os << "stem[";
  for (std::size_t i = 0; i < stem.ids.size(); ++i) {
    if (i) os << ",";
    os << stem.ids[i];
  }
  os << "]";
  return os.str();
}

// Reorders the first k steps of a history by a linear extension lambda of its
// realized order: slot t of the result takes element lambda(t).
OmegaPrefix permuted_history(const OmegaPrefix& om, int k, const std::vector<int>& lambda) {
  OmegaPrefix out;
  for (int t = 0; t < k; ++t) {
    const int src = lambda[static_cast<std::size_t>(t)];
    std::vector<int> down;
    for (int s = 0; s < t; ++s) {
      const int other = lambda[static_cast<std::size_t>(s)];
      // Later positions are never below earlier ones, so only other < src can
      // contribute.
      if (other < src && om.less(other, src)) down.push_back(s);
    }
    out.append(om.labels[static_cast<std::size_t>(src)], std::move(down),
               om.element_ids[static_cast<std::size_t>(src)]);
  }
  return out;
}

std::vector<int> identity_permutation(int k) {
  std::vector<int> id(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) id[static_cast<std::size_t>(i)] = i;
  return id;
}

void add_witness(CheckReport& rep, Witness w) {
  if (rep.witnesses.size() < kMaxWitnesses) rep.witnesses.push_back(std::move(w));
}

Json witness_json(const Witness& w) {
  Json j;
  j["event"] = w.event;
  j["relabeling"] = w.relabeling;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  j["lhs_value"] = w.lhs_value;
  j["rhs_value"] = w.rhs_value;
  j["se"] = w.se;
  j["samples"] = w.samples;
  return j;
}

}  // namespace

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

Json CheckReport::to_json() const {
  Json j;
  j["check"] = check;
  j["kernel"] = kernel;
  j["verdict"] = verdict_str(verdict);
  j["comparisons"] = comparisons;
  j["skipped"] = skipped;
  j["note"] = note;
  j["witnesses"] = Json::array();
  for (const auto& w : witnesses) j["witnesses"].push_back(witness_json(w));
  return j;
}

std::string CheckReport::table() const {
  std::ostringstream os;
  os << check << " on " << kernel << ": " << verdict_str(verdict) << "  (" << comparisons
     << " comparisons, " << skipped << " skipped)\n";
  if (!note.empty()) os << "  note: " << note << "\n";
  for (const auto& w : witnesses) {
    os << "  witness: " << w.event << " vs " << w.relabeling << "  lhs=" << w.lhs
       << "  rhs=" << w.rhs;
    if (w.se > 0) os << "  se=" << w.se << "  n=" << w.samples;
    os << "\n";
  }
  return os.str();
}

CheckReport check_invariance_exact(const GrowthKernel& kernel, int k_max,
                                   bool transpositions_only, std::size_t stem_cap) {
  CheckReport rep;
  rep.check = transpositions_only ? "invariance_exact_transpositions" : "invariance_exact";
  rep.kernel = kernel.name();
  if (k_max < 1) throw std::invalid_argument("check_invariance_exact: k_max >= 1");
  try {
    for (int k = 1; k <= k_max; ++k) {
      const auto stems = enumerate_stems(kernel, k, stem_cap);
      for (const auto& stem : stems) {
        FinitePoset order = stem.omega.prefix_order(k);
        order.labels.clear();
        std::vector<std::vector<int>> lambdas;
        if (transpositions_only) {
          for (int i = 0; i + 1 < k; ++i) {
            if (order.comparable(i, i + 1)) continue;
            auto lam = identity_permutation(k);
            std::swap(lam[static_cast<std::size_t>(i)], lam[static_cast<std::size_t>(i) + 1]);
            lambdas.push_back(std::move(lam));
          }
        } else {
          for (auto& lam : enumerate_extensions(order)) {
            if (lam == identity_permutation(k)) continue;
            lambdas.push_back(std::move(lam));
          }
        }
        for (const auto& lam : lambdas) {
          const OmegaPrefix reordered = permuted_history(stem.omega, k, lam);
          const Golden rhs = exact_stem_probability(kernel, reordered);
          ++rep.comparisons;
          if (!(rhs == stem.prob)) {
            Witness w;
            w.event = stem_str(stem);
            w.relabeling = permutation_str(lam);
            w.lhs = stem.prob.str();
            w.rhs = rhs.str();
            w.lhs_value = stem.prob.to_double();
            w.rhs_value = rhs.to_double();
            add_witness(rep, std::move(w));
          }
        }
      }
    }
    rep.verdict = rep.witnesses.empty() ? Verdict::pass : Verdict::fail;
    if (rep.comparisons == 0) {
      rep.verdict = Verdict::pass;
      rep.note = "all realized orders were chains; every relabeling is trivial";
    }
  } catch (const std::runtime_error& err) {
    rep.verdict = Verdict::inconclusive;
    rep.note = std::string("history enumeration gave up: ") + err.what();
  } catch (const std::logic_error& err) {
    rep.verdict = Verdict::inconclusive;
    rep.note = std::string("kernel has no finite step law: ") + err.what();
  }
  return rep;
}

Rational rgo_event_probability(const BasicEvent& e, const Rational& p) {
  e.validate();
  return product_bin_measure(e) * rgo_order_probability(e.order, p);
}

namespace {

// --- binned estimation ------------------------------------------------------
//
// Every event probability needed by the binned check is a sum of cells
// (realized order on the first k elements, grid cell of each label), so one
// pass over the sample fills a counting table from which all estimates are
// exact lookups.  Keys pack k (4 bits), per-slot strict down-set masks
// (4 x 4 bits) and per-slot grid cells (4 x 11 bits) into 64 bits.

constexpr int kBinnedKMax = 4;
constexpr int kMaxGridCells = 2047;

std::uint64_t pack_key(int k, const std::array<std::uint32_t, 4>& order_masks,
                       const std::array<std::uint32_t, 4>& cells) {
  std::uint64_t key = static_cast<std::uint64_t>(k);
  for (int t = 0; t < k; ++t) key |= static_cast<std::uint64_t>(order_masks[static_cast<std::size_t>(t)]) << (4 + 4 * t);
  for (int t = 0; t < k; ++t) key |= static_cast<std::uint64_t>(cells[static_cast<std::size_t>(t)]) << (20 + 11 * t);
  return key;
}

int grid_cell(const std::vector<Rational>& grid, double x) {
  // Largest i with grid[i] <= x; clamped into [0, cells-1].
  int lo = 0;
  int hi = static_cast<int>(grid.size()) - 1;
  if (cmp_rational_double(grid[0], x) > 0) return 0;
  while (lo + 1 < hi) {
    const int mid = (lo + hi) / 2;
    if (cmp_rational_double(grid[static_cast<std::size_t>(mid)], x) <= 0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::size_t exact_grid_index(const std::vector<Rational>& grid, const Rational& v) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), v);
  if (it == grid.end() || *it != v) throw std::logic_error("binned check: endpoint missing from grid");
  return static_cast<std::size_t>(it - grid.begin());
}

using CountMap = std::unordered_map<std::uint64_t, std::uint64_t>;

// Sum of table counts over the cell product of the event's bins.
std::optional<std::uint64_t> event_count(const CountMap& counts, const std::vector<Rational>& grid,
                                         const BasicEvent& e, std::size_t combo_cap) {
  const int k = e.k();
  std::array<std::uint32_t, 4> order_masks{};
  for (int t = 0; t < k; ++t) order_masks[static_cast<std::size_t>(t)] = e.order.below[t];
  std::array<std::size_t, 4> range_lo{}, range_hi{};
  std::size_t combos = 1;
  for (int t = 0; t < k; ++t) {
    const auto& bin = e.bins[static_cast<std::size_t>(t)];
    range_lo[static_cast<std::size_t>(t)] = exact_grid_index(grid, bin.lo);
    range_hi[static_cast<std::size_t>(t)] = exact_grid_index(grid, bin.hi);
    combos *= range_hi[static_cast<std::size_t>(t)] - range_lo[static_cast<std::size_t>(t)];
  }
  if (combos == 0) return 0;
  if (combos > combo_cap) return std::nullopt;
  std::array<std::uint32_t, 4> cells{};
  for (int t = 0; t < k; ++t) cells[static_cast<std::size_t>(t)] = static_cast<std::uint32_t>(range_lo[static_cast<std::size_t>(t)]);
  std::uint64_t total = 0;
  while (true) {
    const auto it = counts.find(pack_key(k, order_masks, cells));
    if (it != counts.end()) total += it->second;
    int pos = k - 1;
    while (pos >= 0) {
      auto& c = cells[static_cast<std::size_t>(pos)];
      if (c + 1 < range_hi[static_cast<std::size_t>(pos)]) {
        ++c;
        break;
      }
      c = static_cast<std::uint32_t>(range_lo[static_cast<std::size_t>(pos)]);
      --pos;
    }
    if (pos < 0) break;
  }
  return total;
}

struct OrderKey {
  int n;
  std::array<Mask, 4> below;
  bool operator<(const OrderKey& o) const {
    if (n != o.n) return n < o.n;
    return below < o.below;
  }
};

OrderKey order_key(const FinitePoset& p) {
  OrderKey k{p.n, {}};
  for (int i = 0; i < p.n; ++i) k.below[static_cast<std::size_t>(i)] = p.below[i];
  return k;
}

}  // namespace

CheckReport check_invariance_binned(const GrowthKernel& kernel,
                                    const std::vector<BasicEvent>& battery, std::size_t samples,
                                    std::uint64_t seed, int jobs, double alpha,
                                    const EventOracle& oracle) {
  CheckReport rep;
  rep.check = "invariance_binned";
  rep.kernel = kernel.name();
  if (battery.empty()) throw std::invalid_argument("check_invariance_binned: empty battery");
  if (samples == 0) throw std::invalid_argument("check_invariance_binned: samples >= 1");

  int kmax = 0;
  std::vector<Rational> grid{Rational(0), Rational(1)};
  for (const auto& e : battery) {
    e.validate();
    if (e.k() > kBinnedKMax)
      throw std::invalid_argument("check_invariance_binned: events must have k <= 4");
    kmax = std::max(kmax, e.k());
    for (const auto& b : e.bins) {
      if (b.kind != LabelBin::Kind::interval)
        throw std::invalid_argument("check_invariance_binned: interval bins only");
      grid.push_back(b.lo);
      grid.push_back(b.hi);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (static_cast<int>(grid.size()) - 1 > kMaxGridCells)
    throw std::invalid_argument("check_invariance_binned: too many distinct bin endpoints");

  std::vector<int> ks;
  for (const auto& e : battery)
    if (std::find(ks.begin(), ks.end(), e.k()) == ks.end()) ks.push_back(e.k());
  std::sort(ks.begin(), ks.end());

  // One pass over the sample, batched; the merge is a commutative sum, so the
  // result is identical for any worker count.
  const std::size_t batches = std::min<std::size_t>(64, samples);
  const auto maps = mc_map<CountMap>(batches, jobs, [&](std::size_t b) {
    CountMap local;
    const std::size_t lo = b * samples / batches;
    const std::size_t hi = (b + 1) * samples / batches;
    for (std::size_t i = lo; i < hi; ++i) {
      const OmegaPrefix om = trajectory(kernel, kmax, stream_key(seed, i));
      for (int k : ks) {
        std::array<std::uint32_t, 4> order_masks{};
        std::array<std::uint32_t, 4> cells{};
        for (int t = 0; t < k; ++t) {
          std::uint32_t m = 0;
          for (int s = 0; s < t; ++s)
            if (om.less(s, t)) m |= 1u << s;
          order_masks[static_cast<std::size_t>(t)] = m;
          cells[static_cast<std::size_t>(t)] =
              static_cast<std::uint32_t>(grid_cell(grid, om.labels[static_cast<std::size_t>(t)]));
        }
        ++local[pack_key(k, order_masks, cells)];
      }
    }
    return local;
  });
  CountMap counts;
  for (const auto& m : maps)
    for (const auto& [key, c] : m) counts[key] += c;

  // Extension lists are shared across events with the same order.
  std::map<OrderKey, std::vector<std::vector<int>>> ext_cache;
  auto extensions_of = [&](const FinitePoset& order) -> const std::vector<std::vector<int>>& {
    const auto key = order_key(order);
    auto it = ext_cache.find(key);
    if (it == ext_cache.end()) it = ext_cache.emplace(key, enumerate_extensions(order)).first;
    return it->second;
  };

  std::size_t family = 0;
  for (const auto& e : battery) {
    family += extensions_of(e.order).size() - 1;
    if (oracle && oracle(e)) ++family;
  }
  const double z = family_z_threshold(family, alpha);
  const double n = static_cast<double>(samples);
  constexpr std::size_t kComboCap = 65536;
  std::size_t unresolved = 0;

  for (const auto& e : battery) {
    const auto base = event_count(counts, grid, e, kComboCap);
    if (!base) {
      ++unresolved;
      continue;
    }
    const double p0 = static_cast<double>(*base) / n;
    for (const auto& lam : extensions_of(e.order)) {
      if (lam == identity_permutation(e.k())) continue;
      const BasicEvent other = permuted_event(e, lam);
      if (other == e) {
        ++rep.skipped;
        continue;
      }
      const auto cnt = event_count(counts, grid, other, kComboCap);
      if (!cnt) {
        ++unresolved;
        continue;
      }
      if (*base == 0 && *cnt == 0) {
        ++rep.skipped;
        continue;
      }
      const double p1 = static_cast<double>(*cnt) / n;
      const double diff = p0 - p1;
      const double var = std::max(0.0, (p0 + p1 - diff * diff) / n);
      const double se = std::sqrt(var);
      ++rep.comparisons;
      const bool bad = se > 0 ? std::fabs(diff) > z * se : *base != *cnt;
      if (bad) {
        Witness w;
        w.event = e.str();
        w.relabeling = permutation_str(lam);
        w.lhs = std::to_string(p0);
        w.rhs = std::to_string(p1);
        w.lhs_value = p0;
        w.rhs_value = p1;
        w.se = se;
        w.samples = samples;
        add_witness(rep, std::move(w));
      }
    }
    if (oracle) {
      if (const auto mu = oracle(e)) {
        const double target = to_double(*mu);
        const double se = std::sqrt(std::max(0.0, target * (1.0 - target) / n));
        ++rep.comparisons;
        const bool bad = se > 0 ? std::fabs(p0 - target) > z * se
                                : std::fabs(p0 - target) * n > 0.5;
        if (bad) {
          Witness w;
          w.event = e.str();
          w.relabeling = "exact-law";
          w.lhs = std::to_string(p0);
          w.rhs = rational_str(*mu);
          w.lhs_value = p0;
          w.rhs_value = target;
          w.se = se;
          w.samples = samples;
          add_witness(rep, std::move(w));
        }
      }
    }
  }

  std::ostringstream note;
  note << "threshold z=" << z << " over family of " << family << " comparisons, " << samples
       << " histories";
  if (unresolved) note << "; " << unresolved << " events exceeded the cell-combination cap";
  rep.note = note.str();
  if (!rep.witnesses.empty())
    rep.verdict = Verdict::fail;
  else if (rep.comparisons > 0)
    rep.verdict = Verdict::pass;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

CheckReport check_order_markov(const GrowthKernel& kernel, int k_max, std::size_t stem_cap) {
  CheckReport rep;
  rep.check = "order_markov";
  rep.kernel = kernel.name();
  if (k_max < 1) throw std::invalid_argument("check_order_markov: k_max >= 1");
  try {
    for (int k = 1; k <= k_max; ++k) {
      const auto stems = enumerate_stems(kernel, k, stem_cap);
      std::map<std::vector<int>, std::vector<std::size_t>> groups;
      for (std::size_t i = 0; i < stems.size(); ++i) {
        std::vector<int> key = stems[i].ids;
        std::sort(key.begin(), key.end());
        groups[key].push_back(i);
      }
      for (const auto& [key, members] : groups) {
        if (members.size() < 2) continue;
        auto law_of = [&](std::size_t idx) {
          const auto state = kernel.state_from_prefix(stems[idx].omega, k);
          std::map<int, Golden> law;
          for (const auto& opt : kernel.step_distribution(*state)) {
            auto [it, fresh] = law.emplace(opt.element_id, opt.prob);
            if (!fresh) it->second += opt.prob;
          }
          return law;
        };
        const auto ref = law_of(members[0]);
        for (std::size_t j = 1; j < members.size(); ++j) {
          const auto law = law_of(members[j]);
          ++rep.comparisons;
          if (law == ref) continue;
          // Locate one differing entry for the witness.
          std::ostringstream lhs, rhs;
          for (const auto& [id, prob] : ref) {
            const auto it = law.find(id);
            if (it == law.end() || !(it->second == prob)) {
              lhs << "P(next=" << id << ")=" << prob.str();
              rhs << (it == law.end() ? std::string("absent") : it->second.str());
              break;
            }
          }
          if (lhs.str().empty())
            for (const auto& [id, prob] : law)
              if (!ref.count(id)) {
                lhs << "absent";
                rhs << "P(next=" << id << ")=" << prob.str();
                break;
              }
          Witness w;
          w.event = stem_str(stems[members[0]]) + " vs " + stem_str(stems[members[j]]);
          w.relabeling = "same element set";
          w.lhs = lhs.str();
          w.rhs = rhs.str();
          add_witness(rep, std::move(w));
        }
      }
    }
    if (!rep.witnesses.empty())
      rep.verdict = Verdict::fail;
    else if (rep.comparisons > 0)
      rep.verdict = Verdict::pass;
    else {
      rep.verdict = Verdict::pass;
      rep.note = "no two histories reached the same element set; condition is vacuous";
    }
  } catch (const std::runtime_error& err) {
    rep.verdict = Verdict::inconclusive;
    rep.note = std::string("history enumeration gave up: ") + err.what();
  } catch (const std::logic_error& err) {
    rep.verdict = Verdict::inconclusive;
    rep.note = std::string("kernel has no finite step law: ") + err.what();
  }
  return rep;
}

Rational relabel_event_probability(const OmegaPrefix& omega, int n, const BasicEvent& e) {
  e.validate();
  const int m = e.k();
  if (m > n) throw std::invalid_argument("relabel_event_probability: event longer than horizon");
  if (omega.size() < n)
    throw std::invalid_argument("relabel_event_probability: history shorter than horizon");
  FinitePoset p = omega.prefix_order(n);
  p.labels.clear();

  // Sum over ordered m-tuples of distinct positions that (a) form a valid
  // growth prefix of p, (b) put each label in its bin, (c) realize exactly
  // the event order.  Each such tuple is the start of g(tuple-set) linear
  // extensions out of e(p) total.
  auto walk = [&](const auto& table) -> Rational {
    BigInt num(0);
    std::vector<int> tuple;
    Mask used = 0;
    auto dfs = [&](auto&& self) -> void {
      const int t = static_cast<int>(tuple.size());
      if (t == m) {
        num += BigInt(table.g(used));
        return;
      }
      for (int q = 0; q < n; ++q) {
        if ((used >> q) & 1u) continue;
        if (p.below[q] & ~used) continue;  // not addable yet
        if (!e.bins[static_cast<std::size_t>(t)].contains(
                omega.labels[static_cast<std::size_t>(q)]))
          continue;
        bool ok = true;
        for (int s = 0; s < t && ok; ++s)
          if (e.order.less(s, t) != p.less(tuple[static_cast<std::size_t>(s)], q)) ok = false;
        if (!ok) continue;
        tuple.push_back(q);
        used |= Mask(1) << q;
        self(self);
        used &= ~(Mask(1) << q);
        tuple.pop_back();
      }
    };
    dfs(dfs);
    return make_rational(num, BigInt(table.extensions()));
  };

  if (n <= kU64SafeN) return walk(build_lattice<std::uint64_t>(p));
  return walk(build_lattice<BigInt>(p));
}

CheckReport check_transposition_stability(const OmegaPrefix& omega, int n,
                                          const std::vector<BasicEvent>& events) {
  CheckReport rep;
  rep.check = "transposition_stability";
  rep.kernel = omega.kernel_name.empty() ? "history" : omega.kernel_name;
  for (const auto& e : events) {
    const Rational base = relabel_event_probability(omega, n, e);
    const int k = e.k();
    for (int i = 0; i + 1 < k; ++i) {
      if (e.order.comparable(i, i + 1)) {
        ++rep.skipped;  // transposing a comparable pair is the identity map
        continue;
      }
      auto lam = identity_permutation(k);
      std::swap(lam[static_cast<std::size_t>(i)], lam[static_cast<std::size_t>(i) + 1]);
      const Rational other = relabel_event_probability(omega, n, permuted_event(e, lam));
      ++rep.comparisons;
      if (other != base) {
        Witness w;
        w.event = e.str();
        w.relabeling = permutation_str(lam);
        w.lhs = rational_str(base);
        w.rhs = rational_str(other);
        w.lhs_value = to_double(base);
        w.rhs_value = to_double(other);
        add_witness(rep, std::move(w));
      }
    }
  }
  rep.verdict = rep.witnesses.empty() ? Verdict::pass : Verdict::fail;
  if (rep.comparisons == 0 && rep.witnesses.empty()) {
    rep.note = "all adjacent event slots comparable; every transposition acts as the identity";
  }
  return rep;
}

CheckReport check_dlr_exact(const GrowthKernel& kernel, const BasicEvent& e, int n,
                            std::size_t stem_cap) {
  CheckReport rep;
  rep.check = "dlr_exact";
  rep.kernel = kernel.name();
  e.validate();
  if (e.k() > n) throw std::invalid_argument("check_dlr_exact: event longer than horizon");
  try {
    Golden lhs(0);
    for (const auto& stem : enumerate_stems(kernel, e.k(), stem_cap))
      if (e.contains(stem.omega)) lhs += stem.prob;
    Golden rhs(0);
    for (const auto& stem : enumerate_stems(kernel, n, stem_cap))
      rhs += stem.prob * Golden(relabel_event_probability(stem.omega, n, e));
    ++rep.comparisons;
    if (lhs == rhs) {
      rep.verdict = Verdict::pass;
      rep.note = "mu(E) = " + lhs.str() + " matches the conditional average exactly";
    } else {
      rep.verdict = Verdict::fail;
      Witness w;
      w.event = e.str();
      w.relabeling = "conditional average at depth " + std::to_string(n);
      w.lhs = lhs.str();
      w.rhs = rhs.str();
      w.lhs_value = lhs.to_double();
      w.rhs_value = rhs.to_double();
      add_witness(rep, std::move(w));
      rep.note = "discrepancy = " + (lhs - rhs).str();
    }
  } catch (const std::runtime_error& err) {
    rep.verdict = Verdict::inconclusive;
    rep.note = std::string("history enumeration gave up: ") + err.what();
  } catch (const std::logic_error& err) {
    rep.verdict = Verdict::inconclusive;
    rep.note = std::string("kernel has no finite step law: ") + err.what();
  }
  return rep;
}

CheckReport check_dlr_mc(const GrowthKernel& kernel, const BasicEvent& e, int n,
                         std::size_t samples, std::uint64_t seed, int jobs) {
  CheckReport rep;
  rep.check = "dlr_mc";
  rep.kernel = kernel.name();
  e.validate();
  if (e.k() > n) throw std::invalid_argument("check_dlr_mc: event longer than horizon");
  if (samples < 2) throw std::invalid_argument("check_dlr_mc: samples >= 2");

  struct Acc {
    double sum = 0.0, sumsq = 0.0;
  };
  const std::size_t batches = std::min<std::size_t>(64, samples);
  const auto accs = mc_map<Acc>(batches, jobs, [&](std::size_t b) {
    Acc a;
    const std::size_t lo = b * samples / batches;
    const std::size_t hi = (b + 1) * samples / batches;
    for (std::size_t i = lo; i < hi; ++i) {
      const OmegaPrefix om = trajectory(kernel, n, stream_key(seed, i));
      const double d =
          (e.contains(om) ? 1.0 : 0.0) - to_double(relabel_event_probability(om, n, e));
      a.sum += d;
      a.sumsq += d * d;
    }
    return a;
  });
  double sum = 0.0, sumsq = 0.0;
  for (const auto& a : accs) {
    sum += a.sum;
    sumsq += a.sumsq;
  }
  const double nn = static_cast<double>(samples);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sumsq - nn * mean * mean) / (nn - 1.0));
  const double se = std::sqrt(var / nn);
  ++rep.comparisons;
  const bool bad = se > 0 ? std::fabs(mean) > 4.0 * se : mean != 0.0;
  std::ostringstream note;
  note << "paired mean=" << mean << " se=" << se << " over " << samples << " histories";
  rep.note = note.str();
  if (bad) {
    Witness w;
    w.event = e.str();
    w.relabeling = "indicator minus conditional";
    w.lhs = std::to_string(mean);
    w.rhs = "0";
    w.lhs_value = mean;
    w.rhs_value = 0.0;
    w.se = se;
    w.samples = samples;
    add_witness(rep, std::move(w));
    rep.verdict = Verdict::fail;
  } else {
    rep.verdict = Verdict::pass;
  }
  return rep;
}

}  // namespace causetlab
