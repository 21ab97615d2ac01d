#include <doctest.h>

#include <set>

#include "causetlab/models.hpp"

using namespace causetlab;

TEST_CASE("ladder structure") {
  const auto m = CausalSetGenerator::ladder();
  CHECK(m.less(0, 2));
  CHECK(m.less(0, 9));
  CHECK(!m.less(3, 4));  // consecutive pair incomparable
  CHECK(!m.less(2, 0));
  CHECK(m.covers_down(5) == std::vector<int>{2, 3});  // sorted ascending
  CHECK(m.covers_down(1).empty());
  CHECK(m.initial_minimals() == std::vector<int>{0, 1});
  CHECK(!m.size().has_value());
  CHECK(m.down_set(4) == std::vector<int>{0, 1, 2});
}

TEST_CASE("two interleaved chains") {
  const auto m = CausalSetGenerator::two_chains();
  CHECK(m.less(0, 2));
  CHECK(m.less(1, 5));
  CHECK(!m.less(0, 3));  // different parities never compare
  CHECK(m.covers_down(4) == std::vector<int>{2});
  CHECK(m.initial_minimals() == std::vector<int>{0, 1});
}

TEST_CASE("disjoint chains are finite") {
  const auto m = CausalSetGenerator::disjoint_chains(3, 2);
  CHECK(m.size() == 6);
  CHECK(m.less(1, 4));
  CHECK(!m.less(1, 5));
  CHECK(m.covers_down(5) == std::vector<int>{2});
  CHECK_THROWS_AS((void)m.less(0, 6), std::invalid_argument);
  CHECK_THROWS_AS((void)CausalSetGenerator::disjoint_chains(0, 3), std::invalid_argument);
}

TEST_CASE("d-ary tree ancestry") {
  const auto m = CausalSetGenerator::dary_tree(2);
  CHECK(m.covers_down(0).empty());
  CHECK(m.covers_down(1) == std::vector<int>{0});
  CHECK(m.covers_down(6) == std::vector<int>{2});
  CHECK(m.less(0, 11));
  CHECK(m.less(2, 13));   // 13 -> 6 -> 2
  CHECK(!m.less(1, 6));   // different subtrees
  CHECK(m.initial_minimals() == std::vector<int>{0});
}

TEST_CASE("grid is a product order swept by antidiagonals") {
  const auto m = CausalSetGenerator::grid();
  CHECK(m.initial_minimals() == std::vector<int>{0});
  const auto p = m.prefix(10);
  // Product-order sanity on the realized prefix: 0 below everything.
  for (int j = 1; j < 10; ++j) CHECK(p.less(0, j));
  // Each element has at most 2 lower covers in a grid.
  for (int i = 0; i < 10; ++i) CHECK(m.covers_down(i).size() <= 2);
}

TEST_CASE("prefix agrees with pairwise queries and carries distinct labels") {
  for (const auto& m : {CausalSetGenerator::ladder(), CausalSetGenerator::two_chains(),
                        CausalSetGenerator::grid(), CausalSetGenerator::disjoint_chains(2, 4),
                        CausalSetGenerator::dary_tree(3)}) {
    const int n = 8;
    const auto p = m.prefix(n);
    CHECK(p.n == n);
    CHECK(p.is_standard_suborder());  // enumeration is a natural extension
    CHECK(p.has_labels());
    std::set<double> labels;
    for (int i = 0; i < n; ++i) {
      CHECK(p.labels[i] == m.label(i));
      labels.insert(p.labels[i]);
      for (int j = 0; j < n; ++j) CHECK(p.less(i, j) == m.less(i, j));
    }
    CHECK(labels.size() == std::size_t(n));
  }
}

TEST_CASE("ordered stems require down-sets to appear first") {
  const auto m = CausalSetGenerator::ladder();
  CHECK(m.is_ordered_stem({0, 1, 2}));
  CHECK(m.is_ordered_stem({1, 0, 3}));
  CHECK(m.is_ordered_stem({}));
  CHECK(!m.is_ordered_stem({2}));        // 2 needs 0 first
  CHECK(!m.is_ordered_stem({0, 0}));     // repeats
  CHECK(!m.is_ordered_stem({0, 3, 1}));  // 3 needs 1 first
}

TEST_CASE("labels invert within a horizon") {
  const auto m = CausalSetGenerator::two_chains();
  for (int i = 0; i < 50; ++i) CHECK(m.element_by_label(m.label(i)) == i);
  CHECK(!m.element_by_label(0.123456789).has_value());
}

TEST_CASE("custom models must present a natural extension") {
  const auto good = CausalSetGenerator::custom(FinitePoset::chain(3));
  CHECK(good.size() == 3);
  CHECK(good.less(0, 2));
  CHECK_THROWS_AS(
      (void)CausalSetGenerator::custom(FinitePoset::from_relations(2, {{1, 0}})),
      std::invalid_argument);
}

TEST_CASE("model strings parse to the same structures") {
  CHECK(parse_model_string("ladder").kind() == ModelKind::ladder);
  CHECK(parse_model_string("chains:3,4").size() == 12);
  CHECK(parse_model_string("dary:2").covers_down(5) == std::vector<int>{2});
  CHECK_THROWS_AS((void)parse_model_string("mystery"), std::invalid_argument);
}
