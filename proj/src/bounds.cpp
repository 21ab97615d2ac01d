#include "causetlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "causetlab/lattice.hpp"
#include "causetlab/linext.hpp"
#include "causetlab/mc.hpp"
#include "causetlab/models.hpp"

namespace causetlab {

namespace {

Rational big_ratio(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string one_line(const FinitePoset& p) {
  std::string text = poset_to_text(p);
  for (auto& ch : text)
    if (ch == '\n') ch = ';';
  while (!text.empty() && text.back() == ';') text.pop_back();
  return text;
}

}  // namespace

BoundSuite parse_bound_suite(const std::string& name) {
  if (name == "fishburn") return BoundSuite::fishburn;
  if (name == "correlation") return BoundSuite::correlation;
  if (name == "stanley") return BoundSuite::stanley;
  if (name == "lowdownset") return BoundSuite::lowdownset;
  if (name == "qformula") return BoundSuite::qformula;
  throw std::invalid_argument("unknown bound suite: " + name);
}

std::string bound_suite_name(BoundSuite s) {
  switch (s) {
    case BoundSuite::fishburn:
      return "fishburn";
    case BoundSuite::correlation:
      return "correlation";
    case BoundSuite::stanley:
      return "stanley";
    case BoundSuite::lowdownset:
      return "lowdownset";
    default:
      return "qformula";
  }
}

Json BoundReport::to_json() const {
  Json j;
  j["suite"] = suite;
  j["verdict"] = verdict_str(verdict());
  j["instances"] = instances;
  j["comparisons"] = comparisons;
  j["hypothesis_failures"] = hypothesis_failures;
  j["note"] = note;
  if (have_margin) {
    j["min_margin"] = rational_str(min_margin);
    j["min_margin_instance"] = min_margin_instance;
  }
  j["violations"] = Json::array();
  for (const auto& v : violations) {
    Json jv;
    jv["instance"] = v.instance;
    jv["lhs"] = v.lhs;
    jv["rhs"] = v.rhs;
    jv["kind"] = v.kind;
    j["violations"].push_back(jv);
  }
  return j;
}

std::string BoundReport::csv() const {
  std::string out = "instance,lhs,rhs,margin\n";
  for (const auto& row : csv_rows) {
    out += row;
    out += '\n';
  }
  if (csv_omitted) out += "# " + std::to_string(csv_omitted) + " rows omitted beyond cap\n";
  return out;
}

void BoundReport::count(const std::string& instance, const Rational& lhs, const Rational& rhs,
                        const Rational& margin) {
  ++comparisons;
  if (!have_margin || margin < min_margin) {
    have_margin = true;
    min_margin = margin;
    min_margin_instance = instance;
  }
  if (csv_rows.size() < max_csv_rows)
    csv_rows.push_back(instance + "," + rational_str(lhs) + "," + rational_str(rhs) + "," +
                       rational_str(margin));
  else
    ++csv_omitted;
}

void BoundReport::violate(std::string instance, std::string lhs, std::string rhs,
                          std::string kind) {
  if (violations.size() < kMaxViolations)
    violations.push_back({std::move(instance), std::move(lhs), std::move(rhs), std::move(kind)});
}

void BoundReport::absorb(BoundReport&& part) {
  instances += part.instances;
  comparisons += part.comparisons;
  hypothesis_failures += part.hypothesis_failures;
  for (auto& v : part.violations)
    violate(std::move(v.instance), std::move(v.lhs), std::move(v.rhs), std::move(v.kind));
  if (part.have_margin &&
      (!have_margin || part.min_margin < min_margin)) {
    have_margin = true;
    min_margin = part.min_margin;
    min_margin_instance = part.min_margin_instance;
  }
  for (auto& row : part.csv_rows) {
    if (csv_rows.size() < max_csv_rows)
      csv_rows.push_back(std::move(row));
    else
      ++csv_omitted;
  }
  csv_omitted += part.csv_omitted;
}

namespace {

// e(up-set) read off a prebuilt table: the extensions of P minus the
// complementary down-set.
BigInt upset_extensions(const LatticeU64& t, Mask up) {
  return BigInt(t.g(t.p.all_mask() & ~up));
}

}  // namespace

bool verify_fishburn(const FinitePoset& p, Mask u, Mask v, BoundReport& rep,
                     const std::string& instance_id) {
  if (p.up_closure(u) != u || p.up_closure(v) != v)
    throw std::invalid_argument("verify_fishburn: u and v must be up-sets");
  const auto table = build_lattice<std::uint64_t>(p);
  ++rep.instances;
  const BigInt eu = upset_extensions(table, u);
  const BigInt ev = upset_extensions(table, v);
  const BigInt eunion = upset_extensions(table, u | v);
  const BigInt einter = upset_extensions(table, u & v);
  const BigInt lhs = eu * ev;
  const BigInt rhs = eunion * einter;
  rep.count(instance_id, Rational(lhs), Rational(rhs), Rational(rhs - lhs));
  if (lhs > rhs) {
    rep.violate(instance_id + " | " + one_line(p), lhs.get_str(), rhs.get_str(), "inequality");
    return false;
  }
  return true;
}

namespace {

// Shared core so sweeps can reuse one lattice per poset.
bool fishburn_core(const LatticeU64& table, Mask u, Mask v, BoundReport& rep,
                   const std::string& instance_id) {
  ++rep.instances;
  const BigInt eu = upset_extensions(table, u);
  const BigInt ev = upset_extensions(table, v);
  const BigInt eunion = upset_extensions(table, u | v);
  const BigInt einter = upset_extensions(table, u & v);
  const BigInt lhs = eu * ev;
  const BigInt rhs = eunion * einter;
  rep.count(instance_id, Rational(lhs), Rational(rhs), Rational(rhs - lhs));
  if (lhs > rhs) {
    rep.violate(instance_id + " | " + one_line(table.p), lhs.get_str(), rhs.get_str(),
                "inequality");
    return false;
  }
  return true;
}

bool correlation_core(const FinitePoset& p, const LatticeU64& table, int x, Mask d,
                      BoundReport& rep, const std::string& instance_id) {
  ++rep.instances;
  const Mask all = p.all_mask();
  const Mask xbit = Mask(1) << x;

  // Route one: the bottom probabilities themselves, from the public API.
  const Rational nu_p = bottom_probability(p, x);
  const Mask keep = all & ~d;
  const FinitePoset q = p.induced(keep);
  const int x_in_q = popcount(keep & (xbit - 1));
  const Rational nu_q = bottom_probability(q, x_in_q);

  // Route two: the same two numbers as ratios of the four product-inequality
  // counts (U = all minus {x}, V = all minus d) on one shared table.
  const BigInt e_all = upset_extensions(table, all);
  const BigInt e_u = upset_extensions(table, all & ~xbit);
  const BigInt e_v = upset_extensions(table, all & ~d);
  const BigInt e_uv = upset_extensions(table, all & ~(xbit | d));
  const Rational nu_p_alt = big_ratio(e_u, e_all);
  const Rational nu_q_alt = big_ratio(e_uv, e_v);

  bool ok = true;
  if (nu_p != nu_p_alt || nu_q != nu_q_alt) {
    rep.violate(instance_id + " | " + one_line(p),
                rational_str(nu_p) + " & " + rational_str(nu_q),
                rational_str(nu_p_alt) + " & " + rational_str(nu_q_alt), "route-disagreement");
    ok = false;
  }
  rep.count(instance_id, nu_p, nu_q, nu_q - nu_p);
  if (nu_p > nu_q) {
    rep.violate(instance_id + " | " + one_line(p), rational_str(nu_p), rational_str(nu_q),
                "inequality");
    ok = false;
  }
  // The product form of the same instance must agree in verdict.
  if ((e_u * e_v > e_all * e_uv) != (nu_p > nu_q)) {
    rep.violate(instance_id + " | " + one_line(p), "product-form verdict", "ratio-form verdict",
                "route-disagreement");
    ok = false;
  }
  return ok;
}

bool stanley_core(const FinitePoset& p, BoundReport& rep, const std::string& instance_id) {
  ++rep.instances;
  const auto rows = position_distribution(p);
  bool ok = true;
  bool have_local = false;
  Rational local_min;
  for (int x = 0; x < p.n; ++x) {
    const auto& r = rows[static_cast<std::size_t>(x)];
    for (int i = 1; i + 1 < p.n; ++i) {
      const Rational lhs = r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
      const Rational rhs = r[static_cast<std::size_t>(i) - 1] * r[static_cast<std::size_t>(i) + 1];
      const Rational margin = lhs - rhs;
      if (!have_local || margin < local_min) {
        have_local = true;
        local_min = margin;
      }
      ++rep.comparisons;
      if (lhs < rhs) {
        rep.violate(instance_id + " x=" + std::to_string(x) + " i=" + std::to_string(i) + " | " +
                        one_line(p),
                    rational_str(lhs), rational_str(rhs), "inequality");
        ok = false;
      }
      if (r[static_cast<std::size_t>(i)] == 0 && r[static_cast<std::size_t>(i) - 1] > 0 &&
          r[static_cast<std::size_t>(i) + 1] > 0) {
        rep.violate(instance_id + " x=" + std::to_string(x) + " i=" + std::to_string(i) + " | " +
                        one_line(p),
                    "interior zero", "positive neighbours", "zero-gap");
        ok = false;
      }
    }
  }
  if (have_local) {
    // One summary row per poset keeps the margin CSV proportionate.
    if (!rep.have_margin || local_min < rep.min_margin) {
      rep.have_margin = true;
      rep.min_margin = local_min;
      rep.min_margin_instance = instance_id;
    }
    if (rep.csv_rows.size() < rep.max_csv_rows)
      rep.csv_rows.push_back(instance_id + ",,," + rational_str(local_min));
    else
      ++rep.csv_omitted;
  }
  return ok;
}

}  // namespace

bool verify_bottom_correlation(const FinitePoset& p, int x, Mask d, BoundReport& rep,
                               const std::string& instance_id) {
  if (x < 0 || x >= p.n) throw std::invalid_argument("verify_bottom_correlation: x out of range");
  if (p.below[x] != 0)
    throw std::invalid_argument("verify_bottom_correlation: x must be minimal");
  if (!p.is_down_set(d) || ((d >> x) & 1u))
    throw std::invalid_argument("verify_bottom_correlation: d must be a down-set avoiding x");
  const auto table = build_lattice<std::uint64_t>(p);
  return correlation_core(p, table, x, d, rep, instance_id);
}

bool verify_stanley(const FinitePoset& p, BoundReport& rep, const std::string& instance_id) {
  if (p.n < 3) {
    ++rep.instances;
    return true;  // no interior position to test
  }
  return stanley_core(p, rep, instance_id);
}

LowDownsetInstance verify_low_downset_bound(const FinitePoset& p,
                                            const std::vector<Mask>& z_family,
                                            const Rational& delta, int k, BoundReport* rep,
                                            const std::string& instance_id) {
  if (k < 1 || k > p.n) throw std::invalid_argument("verify_low_downset_bound: k in [1, n]");
  if (!(delta >= 0 && delta <= 1))
    throw std::invalid_argument("verify_low_downset_bound: delta in [0,1]");
  bool has_empty = false;
  for (Mask z : z_family) {
    if (z == 0) has_empty = true;
    if (!p.is_down_set(z))
      throw std::invalid_argument("verify_low_downset_bound: family members must be down-sets");
    if (popcount(z) > k)
      throw std::invalid_argument("verify_low_downset_bound: family members must have size <= k");
  }
  if (!has_empty)
    throw std::invalid_argument("verify_low_downset_bound: family must contain the empty set");

  LowDownsetInstance inst;

  // Hypothesis: every one-element escape from the family has bottom
  // probability at most delta in the remainder order.
  for (Mask z : z_family) {
    if (popcount(z) > k - 1) continue;
    for (int x : p.minimal_elements(z)) {
      const Mask grown = z | (Mask(1) << x);
      if (std::find(z_family.begin(), z_family.end(), grown) != z_family.end()) continue;
      const Mask keep = p.all_mask() & ~z;
      const FinitePoset q = p.induced(keep);
      const int x_in_q = popcount(keep & ((Mask(1) << x) - 1));
      const Rational nu = bottom_probability(q, x_in_q);
      if (nu > delta) {
        inst.hypothesis_ok = false;
        inst.hypothesis_note = "escape element " + std::to_string(x) + " from Z=" +
                               std::to_string(z) + " has bottom probability " + rational_str(nu) +
                               " > delta";
      }
    }
  }

  Mask y = 0;
  for (Mask z : z_family) y |= z;
  Mask allowed = y;
  for (int m : p.minimal_elements(y)) allowed |= Mask(1) << m;
  inst.lhs = downset_prefix_probability(p, allowed, k);

  inst.product_bound = Rational(1);
  for (int j = 1; j <= k; ++j) inst.product_bound *= Rational(1) - Rational(j - 1) * delta;
  inst.linear_bound = Rational(1) - Rational(static_cast<long>(k) * (k - 1) / 2) * delta;
  inst.holds = inst.lhs >= inst.product_bound;

  if (inst.product_bound < inst.linear_bound)
    throw std::logic_error("verify_low_downset_bound: product bound fell below its linear form");

  if (rep) {
    ++rep->instances;
    if (!inst.hypothesis_ok) {
      ++rep->hypothesis_failures;
      rep->note = "hypothesis violated on " + instance_id + ": " + inst.hypothesis_note;
    } else {
      rep->count(instance_id, inst.lhs, inst.product_bound, inst.lhs - inst.product_bound);
      if (!inst.holds)
        rep->violate(instance_id + " | " + one_line(p), rational_str(inst.lhs),
                     rational_str(inst.product_bound), "inequality");
    }
  }
  return inst;
}

double q_formula(int k, double delta, double eps) {
  if (k < 1 || !(delta > 0.0 && delta < 1.0) || !(eps > 0.0))
    throw std::invalid_argument("q_formula: need k >= 1, delta in (0,1), eps > 0");
  const double dk1 = std::pow(delta, k + 1);
  return 10.0 * k / dk1 * std::log(5.0 * k / (eps * dk1));
}

double q_formula_log2(int k, double delta, double eps) {
  if (k < 1 || !(delta > 0.0 && delta < 1.0) || !(eps > 0.0))
    throw std::invalid_argument("q_formula_log2: need k >= 1, delta in (0,1), eps > 0");
  const double dk1 = std::pow(delta, k + 1);
  return 10.0 * k / dk1 * std::log2(5.0 * k / (eps * dk1));
}

QFormulaCheck verify_q_formula(const FinitePoset& p, int k, const Rational& delta,
                               const Rational& eps, BoundReport* rep,
                               const std::string& instance_id) {
  if (k < 1 || k > p.n) throw std::invalid_argument("verify_q_formula: k in [1, n]");
  QFormulaCheck chk;
  chk.q_ln = q_formula(k, to_double(delta), to_double(eps));
  chk.q_log2 = q_formula_log2(k, to_double(delta), to_double(eps));
  chk.horizon = static_cast<long long>(std::ceil(chk.q_ln));

  Rational threshold(1);
  for (int j = 0; j <= k; ++j) threshold *= delta;
  for (int x = 0; x < p.n; ++x)
    if (prefix_membership_probability(p, x, k) >= threshold) chk.likely_set |= Mask(1) << x;

  chk.target = Rational(1) - eps / 8;
  if (chk.horizon >= p.n) {
    chk.trivial = true;
    chk.containment = Rational(1);
  } else if (chk.horizon < 1) {
    // Degenerate horizon: only the empty set fits in an empty prefix.
    chk.containment = chk.likely_set == 0 ? Rational(1) : Rational(0);
  } else {
    chk.containment = containment_probability(p, chk.likely_set, static_cast<int>(chk.horizon));
  }
  chk.holds = chk.containment > chk.target;

  if (rep) {
    ++rep->instances;
    rep->count(instance_id, chk.containment, chk.target, chk.containment - chk.target);
    if (!chk.holds)
      rep->violate(instance_id + " | " + one_line(p), rational_str(chk.containment),
                   rational_str(chk.target), "inequality");
  }
  return chk;
}

std::vector<FinitePoset> all_posets_up_to(int n_max) {
  if (n_max < 1 || n_max > 8) throw std::invalid_argument("all_posets_up_to: n_max in [1,8]");
  std::vector<FinitePoset> out;
  // Naturally-labeled generation: element m's strict down-set may be any
  // down-set of the current order.  Dedup by canonical code per size.
  std::vector<FinitePoset> layer{FinitePoset::antichain(1)};
  auto dedup = [&out](const std::vector<FinitePoset>& posets) {
    std::map<std::uint64_t, const FinitePoset*> classes;
    for (const auto& p : posets) classes.emplace(canonical_code(p), &p);
    for (const auto& [code, rep] : classes) out.push_back(*rep);
  };
  dedup(layer);
  for (int m = 2; m <= n_max; ++m) {
    std::vector<FinitePoset> next;
    for (const auto& p : layer) {
      for (Mask d : enumerate_down_sets(p)) {
        FinitePoset q = FinitePoset::antichain(m);
        for (int i = 0; i < p.n; ++i) {
          q.below[i] = p.below[i];
          q.above[i] = p.above[i];
        }
        Mask full = 0;
        Mask bits = d;
        while (bits) {
          const int x = lowest_bit(bits);
          bits &= bits - 1;
          full |= (Mask(1) << x) | p.below[x];
        }
        q.below[m - 1] = full;
        while (full) {
          const int x = lowest_bit(full);
          full &= full - 1;
          q.above[x] |= Mask(1) << (m - 1);
        }
        next.push_back(std::move(q));
      }
    }
    dedup(next);
    layer.swap(next);
  }
  return out;
}

FinitePoset random_closed_order(int n, Rng& rng) {
  if (n < 1 || n > max_poset_n()) throw std::invalid_argument("random_closed_order: bad n");
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.next_below(2) == 0) rel.emplace_back(i, j);
  return FinitePoset::from_relations(n, rel);
}

namespace {

void sweep_poset(BoundSuite suite, const FinitePoset& p, const std::string& id, bool exhaustive,
                 std::size_t sampled_pairs, Rng& rng, BoundReport& rep) {
  switch (suite) {
    case BoundSuite::fishburn: {
      const auto table = build_lattice<std::uint64_t>(p);
      const auto& downsets = table.downsets;
      const Mask all = p.all_mask();
      if (exhaustive) {
        for (std::size_t i = 0; i < downsets.size(); ++i)
          for (std::size_t j = i; j < downsets.size(); ++j)
            fishburn_core(table, all & ~downsets[i], all & ~downsets[j], rep,
                          id + " U=~" + std::to_string(downsets[i]) + " V=~" +
                              std::to_string(downsets[j]));
      } else {
        for (std::size_t s = 0; s < sampled_pairs; ++s) {
          const Mask du = downsets[rng.next_below(downsets.size())];
          const Mask dv = downsets[rng.next_below(downsets.size())];
          fishburn_core(table, all & ~du, all & ~dv, rep,
                        id + " U=~" + std::to_string(du) + " V=~" + std::to_string(dv));
        }
      }
      break;
    }
    case BoundSuite::correlation: {
      const auto table = build_lattice<std::uint64_t>(p);
      const auto downsets = enumerate_down_sets(p);
      const auto minimals = p.minimal_elements();
      if (exhaustive) {
        for (int x : minimals)
          for (Mask d : downsets) {
            if ((d >> x) & 1u) continue;
            correlation_core(p, table, x, d, rep,
                             id + " x=" + std::to_string(x) + " D=" + std::to_string(d));
          }
      } else {
        for (std::size_t s = 0; s < sampled_pairs; ++s) {
          const int x = minimals[rng.next_below(minimals.size())];
          Mask d = downsets[rng.next_below(downsets.size())];
          // Removing x's up-closure keeps d a down-set and avoids x.
          d &= ~((Mask(1) << x) | p.above[x]);
          correlation_core(p, table, x, d, rep,
                           id + " x=" + std::to_string(x) + " D=" + std::to_string(d));
        }
      }
      break;
    }
    case BoundSuite::stanley:
      if (p.n >= 3)
        stanley_core(p, rep, id);
      else
        ++rep.instances;
      break;
    default:
      throw std::logic_error("sweep_poset: suite has no poset sweep");
  }
}

BoundReport fixture_lowdownset_report(std::size_t max_csv_rows) {
  BoundReport rep;
  rep.suite = "lowdownset";
  rep.max_csv_rows = max_csv_rows;
  {
    // Two disjoint chains of length 8; family {empty}; delta 1/2, k = 2.
    const auto p = CausalSetGenerator::disjoint_chains(2, 8).prefix(16);
    verify_low_downset_bound(p, {0}, Rational(1, 2), 2, &rep, "chains(2,8) k=2 d=1/2");
  }
  {
    // Three disjoint chains of length 5; family {empty}; delta 1/3, k = 3.
    const auto p = CausalSetGenerator::disjoint_chains(3, 5).prefix(15);
    verify_low_downset_bound(p, {0}, Rational(1, 3), 3, &rep, "chains(3,5) k=3 d=1/3");
  }
  {
    // k = 1: the bound degenerates to an empty product.
    const auto p = CausalSetGenerator::disjoint_chains(2, 3).prefix(6);
    verify_low_downset_bound(p, {0}, Rational(1, 2), 1, &rep, "chains(2,3) k=1 d=1/2");
  }
  {
    // Non-empty family: two chains of length 2, family {empty, {head-one}}.
    const auto p = CausalSetGenerator::disjoint_chains(2, 2).prefix(4);
    const Mask head_one = 1;  // element 0 is the first chain's head
    verify_low_downset_bound(p, {0, head_one}, Rational(2, 3), 2, &rep,
                             "chains(2,2) family={0,{h1}} k=2 d=2/3");
  }
  return rep;
}

BoundReport fixture_qformula_report(std::size_t max_csv_rows) {
  BoundReport rep;
  rep.suite = "qformula";
  rep.max_csv_rows = max_csv_rows;
  {
    const auto p = CausalSetGenerator::disjoint_chains(3, 5).prefix(15);
    verify_q_formula(p, 2, Rational(1, 3), Rational(1, 2), &rep, "chains(3,5) k=2 d=1/3 e=1/2");
  }
  {
    const auto p = CausalSetGenerator::disjoint_chains(2, 8).prefix(16);
    verify_q_formula(p, 1, Rational(1, 2), Rational(1), &rep, "chains(2,8) k=1 d=1/2 e=1");
  }
  {
    const auto p = CausalSetGenerator::ladder().prefix(12);
    verify_q_formula(p, 2, Rational(1, 2), Rational(1, 4), &rep, "ladder(12) k=2 d=1/2 e=1/4");
  }
  {
    // Loose parameters give a two-step horizon, exercising the exact
    // containment computation instead of the trivial whole-poset case.
    const auto p = FinitePoset::chain(6);
    verify_q_formula(p, 1, Rational(19, 20), Rational(5), &rep, "chain(6) k=1 d=19/20 e=5");
  }
  std::ostringstream note;
  note.precision(17);
  note << "headline natural-log horizon for k=1,d=1/2,e=1: " << q_formula(1, 0.5, 1.0)
       << " (= 40 ln 20); base-2 reading: " << q_formula_log2(1, 0.5, 1.0);
  rep.note = note.str();
  return rep;
}

}  // namespace

BoundReport run_bound_suite(BoundSuite suite, const SweepConfig& cfg) {
  if (suite == BoundSuite::lowdownset) return fixture_lowdownset_report(cfg.max_csv_rows);
  if (suite == BoundSuite::qformula) return fixture_qformula_report(cfg.max_csv_rows);

  BoundReport rep;
  rep.suite = bound_suite_name(suite);
  rep.max_csv_rows = cfg.max_csv_rows;

  // Exhaustive classes first (serial: the list is short), then the random
  // batch (parallel over posets; merge order fixed by index).
  const auto classes = all_posets_up_to(cfg.max_n);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    Rng rng = seed_stream(cfg.seed, i);  // unused by exhaustive sweeps
    sweep_poset(suite, classes[i], "class#" + std::to_string(i), true, 0, rng, rep);
  }

  if (cfg.random_count > 0) {
    const std::size_t batches = std::min<std::size_t>(64, cfg.random_count);
    auto parts = mc_map<BoundReport>(batches, cfg.jobs, [&](std::size_t b) {
      BoundReport part;
      part.max_csv_rows = cfg.max_csv_rows;
      const std::size_t lo = b * cfg.random_count / batches;
      const std::size_t hi = (b + 1) * cfg.random_count / batches;
      for (std::size_t i = lo; i < hi; ++i) {
        Rng rng = seed_stream(cfg.seed, 1000000 + i);
        const FinitePoset p = random_closed_order(cfg.random_n, rng);
        sweep_poset(suite, p, "rand#" + std::to_string(i), false, cfg.pairs_per_random_poset,
                    rng, part);
      }
      return part;
    });
    for (auto& part : parts) rep.absorb(std::move(part));
  }

  std::ostringstream note;
  note << "exhaustive classes up to n=" << cfg.max_n << ": " << classes.size() << "; random "
       << cfg.random_n << "-element posets: " << cfg.random_count;
  rep.note = rep.note.empty() ? note.str() : rep.note + "; " + note.str();
  return rep;
}

}  // namespace causetlab
