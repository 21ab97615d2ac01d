#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "causetlab/rng.hpp"

namespace causetlab {

using BigInt = mpz_class;
using Rational = mpq_class;

// Parses "3", "-5/7", or a plain decimal like "0.125" (exact).
Rational rational_from_string(const std::string& s);

// Canonical "p" or "p/q".
std::string rational_str(const Rational& q);

// Exact conversion (every finite double is a dyadic rational).
Rational rational_from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

// Exact sign of q - x.
int cmp_rational_double(const Rational& q, double x);

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

// Uniform BigInt in [0, n), exact, consuming 64-bit words from rng.
BigInt uniform_bigint_below(Rng& rng, const BigInt& n);

// Index drawn with probability weights[i] / sum(weights); exact. Weights must
// be non-negative with positive sum.
std::size_t weighted_choice_rational(Rng& rng, const std::vector<Rational>& weights);

}  // namespace causetlab
