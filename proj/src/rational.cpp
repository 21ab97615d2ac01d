#include "causetlab/rational.hpp"

#include <stdexcept>
#include <vector>

namespace causetlab {

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rational_from_string: empty string");
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    // decimal form: sign, integer part, fractional part
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0) throw std::invalid_argument("rational_from_string: bad decimal '" + s + "'");
    BigInt num(digits, 10);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) {
    throw std::invalid_argument("rational_from_string: cannot parse '" + s + "'");
  }
  // the zero check must precede canonicalize(), which divides by the denominator
  if (q.get_den() == 0) throw std::invalid_argument("rational_from_string: zero denominator");
  q.canonicalize();
  return q;
}

std::string rational_str(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(double x) {
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

int cmp_rational_double(const Rational& q, double x) {
  const Rational r = rational_from_double(x);
  return cmp(q, r);
}

BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigInt uniform_bigint_below(Rng& rng, const BigInt& n) {
  if (n <= 0) throw std::invalid_argument("uniform_bigint_below: bound must be positive");
  if (n == 1) return 0;
  if (mpz_fits_ulong_p(n.get_mpz_t()) && n.get_ui() <= ~0ull) {
    // common case: bound fits in 64 bits
    return BigInt(static_cast<unsigned long>(rng.next_below(n.get_ui())));
  }
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  // keep only `bits` low bits so the rejection rate stays below 1/2
  const BigInt mask = (BigInt(1) << bits) - 1;
  while (true) {
    BigInt r = 0;
    for (std::size_t w = 0; w < words; ++w) {
      r <<= 64;
      std::uint64_t v = rng.next_u64();
      BigInt chunk;
      mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
      r |= chunk;
    }
    r &= mask;
    if (r < n) return r;
  }
}

std::size_t weighted_choice_rational(Rng& rng, const std::vector<Rational>& weights) {
  if (weights.empty()) throw std::invalid_argument("weighted_choice_rational: no weights");
  BigInt lcm_den = 1;
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("weighted_choice_rational: negative weight");
    BigInt d = w.get_den();
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), d.get_mpz_t());
  }
  std::vector<BigInt> scaled(weights.size());
  BigInt total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    scaled[i] = weights[i].get_num() * (lcm_den / weights[i].get_den());
    total += scaled[i];
  }
  if (total == 0) throw std::invalid_argument("weighted_choice_rational: zero total weight");
  BigInt draw = uniform_bigint_below(rng, total);
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    if (draw < scaled[i]) return i;
    draw -= scaled[i];
  }
  return weights.size() - 1;  // unreachable
}

}  // namespace causetlab
