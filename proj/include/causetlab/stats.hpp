#pragma once

#include <cstddef>
#include <vector>

namespace causetlab {

// Upper tail P(X >= x) of the chi-square distribution with dof degrees of freedom.
double chi2_sf(double x, int dof);

// Smallest c with chi2_sf(c, dof) <= alpha.
double chi2_critical(int dof, double alpha);

// Two-sided Kolmogorov-Smirnov statistic of a sample against uniform(0,1).
double ks_uniform_statistic(std::vector<double> samples);

// Asymptotic two-sided KS critical value at significance alpha.
double ks_critical(std::size_t n, double alpha);

// z with P(Z > z) = alpha for standard normal Z.
double normal_upper_quantile(double alpha);

// Threshold for a family of m two-sided z-comparisons at family significance
// alpha (Bonferroni), never below 4.
double family_z_threshold(std::size_t m, double alpha);

// Pearson chi-square statistic of observed counts against expected counts.
double chi2_statistic(const std::vector<double>& observed, const std::vector<double>& expected);

}  // namespace causetlab
