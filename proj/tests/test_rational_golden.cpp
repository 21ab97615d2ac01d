#include <doctest.h>

#include <map>

#include "causetlab/golden.hpp"
#include "causetlab/rational.hpp"
#include "causetlab/stats.hpp"

using namespace causetlab;

TEST_CASE("rational parsing and printing") {
  CHECK(rational_from_string("3") == Rational(3));
  CHECK(rational_from_string("-5/7") == Rational(-5, 7));
  CHECK(rational_from_string("0.125") == Rational(1, 8));
  CHECK(rational_from_string("2/4") == Rational(1, 2));  // canonicalized
  CHECK(rational_str(Rational(3, 2)) == "3/2");
  CHECK(rational_str(Rational(5)) == "5");
  CHECK_THROWS_AS((void)rational_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS((void)rational_from_string("x"), std::invalid_argument);
}

TEST_CASE("rational/double comparison is exact") {
  CHECK(cmp_rational_double(Rational(1, 2), 0.5) == 0);
  CHECK(cmp_rational_double(Rational(1, 3), 0.3333333333333333) > 0);  // 1/3 > its double
  CHECK(rational_from_double(0.75) == Rational(3, 4));
  CHECK(rational_from_double(0.1) != Rational(1, 10));  // 0.1 is not exactly 1/10
}

TEST_CASE("factorial and binomial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(binomial(16, 8) == 12870);
  CHECK(binomial(5, 7) == 0);
}

TEST_CASE("golden field identities hold exactly") {
  const Golden g = Golden::g();
  CHECK(g * g == Golden(1) - g);               // defining relation
  CHECK(g * g + g - Golden(1) == Golden(0));
  CHECK(g * g.inverse() == Golden(1));
  CHECK(g.inverse() == Golden(1) + g);         // 1/g = 1 + g
  const Golden x(Rational(3, 7), Rational(-2, 5));
  CHECK(x * x.inverse() == Golden(1));
  CHECK((x / x) == Golden(1));
  CHECK_THROWS_AS((void)Golden(0).inverse(), std::invalid_argument);
  CHECK(g.to_double() == doctest::Approx(0.6180339887498949).epsilon(1e-15));
  CHECK(Golden(Rational(1, 2)).is_rational());
  CHECK(!g.is_rational());
}

TEST_CASE("exact weighted choice matches its weights") {
  Rng rng(stream_key(77, 0));
  const std::vector<Rational> w = {Rational(1, 6), Rational(1, 3), Rational(1, 2)};
  std::map<std::size_t, int> counts;
  const int kDraws = 60000;
  for (int i = 0; i < kDraws; ++i) ++counts[weighted_choice_rational(rng, w)];
  std::vector<double> obs = {double(counts[0]), double(counts[1]), double(counts[2])};
  std::vector<double> expect = {kDraws / 6.0, kDraws / 3.0, kDraws / 2.0};
  CHECK(chi2_statistic(obs, expect) < chi2_critical(2, 1e-3));
}

TEST_CASE("uniform big integers are unbiased") {
  Rng rng(stream_key(78, 0));
  const BigInt n(7);
  std::vector<double> obs(7, 0.0);
  const int kDraws = 70000;
  for (int i = 0; i < kDraws; ++i) obs[uniform_bigint_below(rng, n).get_ui()] += 1.0;
  std::vector<double> expect(7, kDraws / 7.0);
  CHECK(chi2_statistic(obs, expect) < chi2_critical(6, 1e-3));
}
