#include "causetlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace causetlab {

namespace {

// Regularized upper incomplete gamma Q(a, x) via series / continued fraction.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, Q = 1 - P.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return std::max(0.0, 1.0 - p);
  }
  // Q(a,x) by Lentz continued fraction.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace

double chi2_sf(double x, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi2_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_critical(int dof, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("chi2_critical: alpha in (0,1)");
  double lo = 0.0, hi = 1.0;
  while (chi2_sf(hi, dof) > alpha) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_sf(mid, dof) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double ks_uniform_statistic(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ks_uniform_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    const double up = (static_cast<double>(i) + 1.0) / n - x;
    const double down = x - static_cast<double>(i) / n;
    d = std::max(d, std::max(up, down));
  }
  return d;
}

double ks_critical(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("ks_critical: n must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_critical: alpha in (0,1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

double normal_upper_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("normal_upper_quantile: alpha in (0,0.5)");
  double lo = 0.0, hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double tail = 0.5 * std::erfc(mid / std::sqrt(2.0));
    if (tail > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double family_z_threshold(std::size_t m, double alpha) {
  if (m == 0) return 4.0;
  const double per = alpha / (2.0 * static_cast<double>(m));
  const double z = normal_upper_quantile(std::min(per, 0.49));
  return std::max(4.0, z);
}

double chi2_statistic(const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi2_statistic: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) throw std::invalid_argument("chi2_statistic: nonpositive expected count");
    const double d = observed[i] - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

}  // namespace causetlab
