#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "causetlab/events.hpp"
#include "causetlab/growth.hpp"
#include "causetlab/lw_coupling.hpp"
#include "causetlab/models.hpp"
#include "test_util.hpp"

using namespace causetlab;

namespace {

Golden stem_sum(const GrowthKernel& k, int depth) {
  Golden total(0);
  for (const auto& s : enumerate_stems(k, depth)) total += s.prob;
  return total;
}

}  // namespace

TEST_CASE("golden-ratio ladder: exact two-step stem weights") {
  auto k = kernel_ladder_golden();
  const Golden g = Golden::g();
  Golden p01 = exact_stem_probability(*k, {0, 1});
  Golden p10 = exact_stem_probability(*k, {1, 0});
  CHECK(p01 == g * g);
  CHECK(p01 == Golden(1) - g);  // the quadratic identity, exactly
  CHECK(p10 == Golden(1) - g);
  // After [1], only 0 is addable (2 needs 0 below it), so the second factor is 1.
  CHECK(exact_stem_probability(*k, {1}) == Golden(1) - g);
  // Stems must respect addability: 2 requires 0 first.
  CHECK(exact_stem_probability(*k, {2}) == Golden(0));
  CHECK(exact_stem_probability(*k, {0, 3}) == Golden(0));
  for (int depth = 1; depth <= 6; ++depth) CHECK(stem_sum(*k, depth) == Golden(1));
}

TEST_CASE("half-weight ladder: control stem weights") {
  auto k = kernel_ladder_half();
  CHECK(exact_stem_probability(*k, {0, 1}) == Golden(frac(1, 4)));
  CHECK(exact_stem_probability(*k, {0, 2}) == Golden(frac(1, 4)));
  CHECK(exact_stem_probability(*k, {1, 0}) == Golden(frac(1, 2)));
  for (int depth = 1; depth <= 6; ++depth) CHECK(stem_sum(*k, depth) == Golden(1));
}

TEST_CASE("two-chain kernel: product stem law") {
  const Rational q = frac(1, 3);
  auto k = kernel_two_chains(q);
  for (int depth = 1; depth <= 6; ++depth) {
    Golden total(0);
    for (const auto& s : enumerate_stems(*k, depth)) {
      int even = 0;
      for (int id : s.ids)
        if (id % 2 == 0) ++even;
      Rational want(1);
      for (int i = 0; i < even; ++i) want *= q;
      for (int i = even; i < depth; ++i) want *= Rational(1) - q;
      CHECK(s.prob == Golden(want));
      total += s.prob;
    }
    CHECK(total == Golden(1));
  }
}

TEST_CASE("urn kernel: exchangeable stem weights a!b!/(a+b+1)!") {
  auto k = kernel_polya_urn();
  CHECK(exact_stem_probability(*k, {0, 1}) == Golden(frac(1, 6)));
  for (int depth = 1; depth <= 5; ++depth) {
    Golden total(0);
    for (const auto& s : enumerate_stems(*k, depth)) {
      int a = 0;
      for (int id : s.ids)
        if (id % 2 == 0) ++a;
      int b = depth - a;
      Rational want(factorial(a) * factorial(b), factorial(a + b + 1));
      want.canonicalize();
      CHECK(s.prob == Golden(want));
      total += s.prob;
    }
    CHECK(total == Golden(1));
  }
}

TEST_CASE("graph-order law: product over covering and incomparable pairs") {
  for (const Rational& p : {frac(1, 3), frac(1, 2), frac(3, 5)}) {
    for (int n = 1; n <= 4; ++n) {
      Rational total(0);
      for (const auto& q : standard_suborders(n)) total += rgo_order_probability(q, p);
      CHECK(total == Rational(1));
    }
    // chain: every consecutive pair is a cover, nothing incomparable
    Rational chain = rgo_order_probability(FinitePoset::chain(4), p);
    CHECK(chain == p * p * p);
    // antichain: no covers, all pairs incomparable
    Rational anti = rgo_order_probability(FinitePoset::antichain(4), p);
    Rational miss = Rational(1) - p;
    CHECK(anti == miss * miss * miss * miss * miss * miss);
    // two bottoms under one top: two covers, one incomparable pair
    Rational vee = rgo_order_probability(FinitePoset::from_relations(3, {{0, 2}, {1, 2}}), p);
    CHECK(vee == p * p * miss);
  }
}

TEST_CASE("subset-weight one-step law matches the seeded-closure law for geometric weights") {
  const Rational p = frac(2, 5);
  const Rational ratio = p / (Rational(1) - p);  // 2/3
  std::vector<Rational> t{Rational(1)};
  for (int s = 1; s <= 4; ++s) t.push_back(t.back() * ratio);
  for (int n = 1; n <= 4; ++n) {
    for (const auto& q : standard_suborders(n)) {
      // direct law: each existing element is a seed independently with prob p,
      // and the new down-set is the seeds' down-closure
      std::map<Mask, Rational> want;
      for (Mask seeds = 0; seeds < (Mask(1) << n); ++seeds) {
        Mask closed = seeds;
        for (int x = 0; x < n; ++x)
          if (seeds >> x & 1) closed |= q.below[x];
        Rational pr(1);
        for (int x = 0; x < n; ++x) pr *= (seeds >> x & 1) ? p : Rational(1) - p;
        want[closed] += pr;
      }
      std::set<Mask> seen;
      Rational total(0);
      for (const auto& [mask, pr] : csg_step_distribution(t, q)) {
        CHECK(seen.insert(mask).second);  // each down-set listed once
        CHECK(pr == want[mask]);          // zero where no seed set closes to it
        total += pr;
      }
      CHECK(total == Rational(1));
      for (const auto& [mask, pr] : want) CHECK(seen.count(mask) == 1);
    }
  }
}

TEST_CASE("subset-weight kernel with a single unit weight grows an antichain") {
  for (const auto& [mask, pr] : csg_step_distribution({Rational(1)}, FinitePoset::antichain(3)))
    CHECK(pr == (mask == 0 ? Rational(1) : Rational(0)));
  auto k = kernel_csg({Rational(1)});
  auto omega = trajectory(*k, 12, 5);
  for (const auto& d : omega.delta) CHECK(d.empty());
}

TEST_CASE("graph-order kernel produces transitively closed histories") {
  auto k = kernel_random_graph_order(frac(1, 2));
  auto omega = trajectory(*k, 20, 11);
  for (int j = 0; j < omega.size(); ++j) {
    // delta is sorted, in range, and downward closed
    const auto& d = omega.delta[j];
    CHECK(std::is_sorted(d.begin(), d.end()));
    std::set<int> ds(d.begin(), d.end());
    CHECK(static_cast<int>(ds.size()) == static_cast<int>(d.size()));
    for (int i : d) {
      REQUIRE(0 <= i);
      REQUIRE(i < j);
      for (int below : omega.delta[i]) CHECK(ds.count(below) == 1);
    }
  }
}

TEST_CASE("subtree tables: layer sizes, row totals, and uniform propagation") {
  SubtreeTables tab(2, 6);
  const long long counts[] = {1, 2, 5, 14, 42, 132};
  for (int s = 1; s <= 6; ++s) CHECK(tab.layer_count(s) == counts[s - 1]);
  for (int s = 1; s < 6; ++s) {
    const auto& tr = tab.transition(s);
    std::vector<Rational> inflow(tab.layer_count(s + 1), Rational(0));
    for (const auto& row : tr.rows) {
      Rational total(0);
      for (const auto& [j, pr] : row) {
        CHECK(pr > 0);
        total += pr;
        inflow[j] += pr;
      }
      CHECK(total == Rational(1));
    }
    // uniform in, uniform out: every target tree receives |layer s| / |layer s+1|
    Rational want(tab.layer_count(s), tab.layer_count(s + 1));
    want.canonicalize();
    for (const auto& f : inflow) CHECK(f == want);
  }
}

TEST_CASE("subtree kernel: forced two-to-three transition row") {
  auto k = kernel_lw_subtree(2, 8);
  auto st = k->initial_state();
  Rng rng(1);
  k->step(*st, rng);  // root
  auto opts = k->step_distribution(*st);
  REQUIRE(opts.size() == 2);  // children 1 and 2, each 1/2
  for (const auto& o : opts) CHECK(o.prob == Golden(frac(1, 2)));
  // advance with node 1, then the size-3 row is pinned by uniformity of layers
  auto it = std::find_if(opts.begin(), opts.end(),
                         [](const AtomicOption& o) { return o.element_id == 1; });
  REQUIRE(it != opts.end());
  k->advance_with(*st, *it);
  std::map<int, Golden> row;
  for (const auto& o : k->step_distribution(*st)) row[o.element_id] = o.prob;
  REQUIRE(row.size() == 3);
  CHECK(row.at(2) == Golden(frac(1, 5)));  // completes the only tree reachable two ways
  CHECK(row.at(3) == Golden(frac(2, 5)));
  CHECK(row.at(4) == Golden(frac(2, 5)));
}

TEST_CASE("subtree kernel: realized trees of each size are uniform") {
  auto k = kernel_lw_subtree(2, 8);
  for (int depth = 1; depth <= 4; ++depth) {
    std::map<std::vector<int>, Golden> by_tree;
    Golden total(0);
    for (const auto& s : enumerate_stems(*k, depth)) {
      auto nodes = s.ids;
      std::sort(nodes.begin(), nodes.end());
      auto [it, fresh] = by_tree.emplace(nodes, Golden(0));
      it->second += s.prob;
      (void)fresh;
      total += s.prob;
    }
    SubtreeTables tab(2, depth + 1);
    CHECK(static_cast<long long>(by_tree.size()) == tab.layer_count(depth));
    Rational share(1, tab.layer_count(depth));
    share.canonicalize();
    for (const auto& [nodes, mass] : by_tree) CHECK(mass == Golden(share));
    CHECK(total == Golden(1));
  }
}

TEST_CASE("kernel configuration round-trips through JSON") {
  std::vector<std::unique_ptr<GrowthKernel>> kernels;
  kernels.push_back(kernel_ladder_golden());
  kernels.push_back(kernel_ladder_half());
  kernels.push_back(kernel_two_chains(frac(1, 3)));
  kernels.push_back(kernel_polya_urn());
  kernels.push_back(kernel_random_graph_order(frac(2, 5)));
  kernels.push_back(kernel_csg({Rational(1), frac(2, 3), frac(4, 9)}));
  kernels.push_back(kernel_iid_antichain());
  kernels.push_back(kernel_chain_with_marks({Rational(1), frac(1, 2)}));
  kernels.push_back(kernel_lw_subtree(2, 8));
  kernels.push_back(kernel_marked_poset(FinitePoset::chain(2), Mask(1) << 1, {Rational(1)},
                                        {LabelDistribution::uniform01()}));
  for (const auto& k : kernels) {
    auto back = make_kernel(k->config_json());
    CHECK(back->name() == k->name());
    CHECK(back->config_json() == k->config_json());
  }
  CHECK_THROWS_AS(make_kernel(Json{{"kind", "unheard_of"}}), std::invalid_argument);
}

TEST_CASE("trajectories are reproducible and seed-sensitive") {
  for (const auto& k : {kernel_ladder_golden(), kernel_random_graph_order(frac(1, 2)),
                        kernel_chain_with_marks({Rational(1), frac(1, 2)})}) {
    auto a = trajectory(*k, 15, 42);
    auto b = trajectory(*k, 15, 42);
    CHECK(a.serialize() == b.serialize());
    auto c = trajectory(*k, 15, 43);
    CHECK(a.serialize() != c.serialize());
    CHECK(a.label_collisions == 0);
  }
}

TEST_CASE("history text round-trips") {
  for (const auto& k : {kernel_ladder_golden(), kernel_random_graph_order(frac(1, 2))}) {
    auto omega = trajectory(*k, 10, 7);
    auto back = OmegaPrefix::parse(omega.serialize());
    CHECK(back.labels == omega.labels);
    CHECK(back.delta == omega.delta);
    CHECK(back.element_ids == omega.element_ids);
    CHECK(back.kernel_name == omega.kernel_name);
    CHECK(back.seed == omega.seed);
    CHECK(back.serialize() == omega.serialize());
  }
}

TEST_CASE("stem weight of a generated history matches the id-sequence weight") {
  auto k = kernel_ladder_golden();
  auto omega = trajectory(*k, 8, 3);
  Golden via_ids = exact_stem_probability(*k, omega.element_ids);
  CHECK(exact_stem_probability(*k, omega) == via_ids);
  CHECK(via_ids.to_double() > 0.0);
}

TEST_CASE("resuming from a history prefix validates the history") {
  auto golden = kernel_ladder_golden();
  auto omega = trajectory(*golden, 10, 9);
  for (int upto : {0, 4, 10}) CHECK(golden->state_from_prefix(omega, upto)->count() == upto);
  CHECK_THROWS_AS(golden->state_from_prefix(omega, 11), std::invalid_argument);

  // a history with comparabilities cannot come from the antichain kernel
  auto iid = kernel_iid_antichain();
  CHECK_THROWS_AS(iid->state_from_prefix(omega, 10), std::invalid_argument);

  // corrupt one down-set: the fixed-order kernel must notice
  auto broken = omega;
  broken.delta[5].push_back(4);
  std::sort(broken.delta[5].begin(), broken.delta[5].end());
  broken.delta[5].erase(std::unique(broken.delta[5].begin(), broken.delta[5].end()),
                        broken.delta[5].end());
  bool valid = true;
  try {
    golden->state_from_prefix(broken, 10);
  } catch (const std::invalid_argument&) {
    valid = false;
  }
  // element 5's true down-set never contains position 4 on this ladder history
  if (broken.delta[5] != omega.delta[5]) CHECK_FALSE(valid);

  // chain-with-marks rejects an isolated element with a foreign label
  auto marks = kernel_chain_with_marks({Rational(1), frac(1, 2)});
  OmegaPrefix fake;
  fake.append(0.123456, {}, -1);
  CHECK_THROWS_AS(marks->state_from_prefix(fake, 1), std::invalid_argument);
}

TEST_CASE("antichain kernel with a restricted label law") {
  auto k = kernel_iid_antichain(
      LabelDistribution::piecewise({{frac(0, 1), frac(1, 2), Rational(1)}}));
  auto omega = trajectory(*k, 30, 13);
  for (int j = 0; j < omega.size(); ++j) {
    CHECK(omega.delta[j].empty());
    CHECK(omega.labels[j] < 0.5);
  }
  CHECK(k->persistent_labels(5).empty());
}

TEST_CASE("piecewise label law: interval masses are exact") {
  auto unif = LabelDistribution::uniform01();
  CHECK(unif.measure_interval(frac(1, 4), frac(1, 2)) == frac(1, 4));
  CHECK(unif.measure_interval(frac(0, 1), Rational(1)) == Rational(1));
  // two pieces carrying mass 1/4 and 3/4
  auto two = LabelDistribution::piecewise(
      {{frac(0, 1), frac(1, 4), frac(1, 4)}, {frac(1, 2), Rational(1), frac(3, 4)}});
  CHECK(two.measure_interval(frac(0, 1), frac(1, 4)) == frac(1, 4));
  CHECK(two.measure_interval(frac(1, 2), Rational(1)) == frac(3, 4));
  CHECK(two.measure_interval(frac(1, 4), frac(1, 2)) == Rational(0));
  // half of the second piece carries half its mass
  CHECK(two.measure_interval(frac(1, 2), frac(3, 4)) == frac(3, 8));
  CHECK(two.measure_interval(frac(0, 1), Rational(1)) == Rational(1));
  auto back = LabelDistribution::from_json(two.to_json());
  CHECK(back.measure_interval(frac(1, 2), Rational(1)) == frac(3, 4));
}

TEST_CASE("chain-with-marks: histories validate and spine labels persist") {
  auto k = kernel_chain_with_marks({Rational(1), frac(1, 2)});
  auto omega = trajectory(*k, 40, 17);
  CHECK(k->state_from_prefix(omega, 40)->count() == 40);
  // the first element is always the spine bottom
  auto spine = k->persistent_labels(8);
  REQUIRE(spine.size() == 8);
  CHECK(omega.labels[0] == spine[0]);
  CHECK(omega.delta[0].empty());
  // every down-set is a prefix of the spine positions seen so far
  std::vector<int> spine_pos;
  for (int j = 0; j < omega.size(); ++j) {
    const auto& d = omega.delta[j];
    CHECK(static_cast<int>(d.size()) <= static_cast<int>(spine_pos.size()) + 1);
    CHECK(std::equal(d.begin(), d.end(), spine_pos.begin()));
    int sp = static_cast<int>(spine_pos.size());
    if (sp < 8 && omega.labels[j] == spine[sp] && static_cast<int>(d.size()) == sp)
      spine_pos.push_back(j);
  }
  CHECK(spine_pos.size() >= 2);  // the spine keeps growing
  CHECK_THROWS_AS(kernel_chain_with_marks({frac(1, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(kernel_chain_with_marks({Rational(1), frac(1, 2), frac(2, 3)}),
                  std::invalid_argument);
}

TEST_CASE("marked-order kernel: one transient element, one recurrent mark") {
  auto k = kernel_marked_poset(FinitePoset::chain(2), Mask(1) << 1, {Rational(1)},
                               {LabelDistribution::uniform01()});
  auto omega = trajectory(*k, 6, 2);
  CHECK(omega.element_ids[0] == 0);
  CHECK(omega.delta[0].empty());
  for (int j = 1; j < 6; ++j) {
    CHECK(omega.element_ids[j] == -3);  // the mark recurs forever
    CHECK(omega.delta[j] == std::vector<int>{0});
  }
  CHECK(k->state_from_prefix(omega, 6)->count() == 6);
  CHECK(k->persistent_labels(4) == std::vector<double>{omega.labels[0]});
  // marked elements must be maximal, and weights must not exceed one
  CHECK_THROWS_AS(kernel_marked_poset(FinitePoset::chain(2), Mask(1), {Rational(1)},
                                      {LabelDistribution::uniform01()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_marked_poset(FinitePoset::chain(2), Mask(1) << 1, {Rational(2)},
                                      {LabelDistribution::uniform01()}),
                  std::invalid_argument);
}

TEST_CASE("atomic one-step laws are probability distributions") {
  for (const auto& k : {kernel_ladder_golden(), kernel_two_chains(frac(1, 4)),
                        kernel_polya_urn(), kernel_lw_subtree(2, 8)}) {
    REQUIRE(k->is_atomic());
    auto st = k->initial_state();
    Rng rng(77);
    for (int j = 0; j < 6; ++j) {
      Golden total(0);
      for (const auto& o : k->step_distribution(*st)) {
        CHECK(o.prob.to_double() > 0.0);
        total += o.prob;
      }
      CHECK(total == Golden(1));
      k->step(*st, rng);
    }
    CHECK(st->count() == 6);
  }
  CHECK_FALSE(kernel_random_graph_order(frac(1, 2))->is_atomic());
}

TEST_CASE("lightweight stepping tracks the full step") {
  auto k = kernel_polya_urn();
  auto a = k->initial_state();
  auto b = k->initial_state();
  Rng ra(5), rb(5);
  for (int j = 0; j < 20; ++j) {
    int ea = k->step(*a, ra).element_id;
    int eb = k->step_light(*b, rb);
    CHECK(ea == eb);
  }
}
