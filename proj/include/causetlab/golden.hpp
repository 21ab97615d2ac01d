#pragma once

#include <string>

#include "causetlab/rational.hpp"

namespace causetlab {

// Elements of the quadratic field Q(g) where g = (sqrt(5)-1)/2, the positive
// root of g^2 = 1 - g.  Values are stored as a + b*g with rational a, b; the
// representation is unique because g is irrational, so equality tests are
// exact.  This is the natural arithmetic for growth rules whose step weights
// are g and 1-g: identities such as g^2 = 1 - g hold on the nose instead of
// up to floating-point error.
struct Golden {
  Rational a, b;  // value = a + b*g

  Golden() : a(0), b(0) {}
  Golden(int v) : a(v), b(0) {}                       // NOLINT(google-explicit-constructor)
  Golden(const Rational& v) : a(v), b(0) {}           // NOLINT(google-explicit-constructor)
  Golden(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {}

  static Golden g() { return Golden(Rational(0), Rational(1)); }

  bool is_rational() const { return b == 0; }

  double to_double() const {
    static constexpr double kG = 0.6180339887498948482045868343656381177;
    return causetlab::to_double(a) + causetlab::to_double(b) * kG;
  }

  std::string str() const {
    if (b == 0) return rational_str(a);
    std::string s = rational_str(a);
    s += (b > 0) ? " + " : " - ";
    s += rational_str(abs(b));
    s += "*g";
    return s;
  }

  friend Golden operator+(const Golden& x, const Golden& y) {
    return Golden(x.a + y.a, x.b + y.b);
  }
  friend Golden operator-(const Golden& x, const Golden& y) {
    return Golden(x.a - y.a, x.b - y.b);
  }
  friend Golden operator-(const Golden& x) { return Golden(-x.a, -x.b); }
  // (a1 + b1 g)(a2 + b2 g) = a1 a2 + b1 b2 + (a1 b2 + a2 b1 - b1 b2) g
  friend Golden operator*(const Golden& x, const Golden& y) {
    return Golden(x.a * y.a + x.b * y.b, x.a * y.b + y.a * x.b - x.b * y.b);
  }
  // 1/(a + b g) = ((a - b) - b g) / (a^2 - a b - b^2); the norm is nonzero
  // for any nonzero element because g is irrational.
  Golden inverse() const {
    Rational norm = a * a - a * b - b * b;
    if (norm == 0) throw std::invalid_argument("Golden::inverse: zero element");
    return Golden((a - b) / norm, -b / norm);
  }
  friend Golden operator/(const Golden& x, const Golden& y) { return x * y.inverse(); }

  Golden& operator+=(const Golden& y) { return *this = *this + y; }
  Golden& operator-=(const Golden& y) { return *this = *this - y; }
  Golden& operator*=(const Golden& y) { return *this = *this * y; }

  friend bool operator==(const Golden& x, const Golden& y) {
    return x.a == y.a && x.b == y.b;
  }
  friend bool operator!=(const Golden& x, const Golden& y) { return !(x == y); }

  bool is_zero() const { return a == 0 && b == 0; }
};

}  // namespace causetlab
