#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causetlab/invariance.hpp"
#include "causetlab/poset.hpp"
#include "causetlab/rational.hpp"
#include "causetlab/rng.hpp"

namespace causetlab {

enum class BoundSuite { fishburn, correlation, stanley, lowdownset, qformula };

BoundSuite parse_bound_suite(const std::string& name);
std::string bound_suite_name(BoundSuite s);

struct BoundViolation {
  std::string instance;
  std::string lhs, rhs;
  std::string kind;  // "inequality" | "route-disagreement" | "zero-gap"
};

struct BoundReport {
  std::string suite;
  std::uint64_t instances = 0;    // instances examined
  std::uint64_t comparisons = 0;  // elementary exact comparisons
  std::uint64_t hypothesis_failures = 0;
  std::vector<BoundViolation> violations;  // capped at kMaxViolations
  bool have_margin = false;
  Rational min_margin;
  std::string min_margin_instance;
  std::vector<std::string> csv_rows;  // "instance,lhs,rhs,margin"
  std::uint64_t csv_omitted = 0;
  std::size_t max_csv_rows = 100000;
  std::string note;

  Verdict verdict() const { return violations.empty() ? Verdict::pass : Verdict::fail; }
  Json to_json() const;
  std::string csv() const;

  void count(const std::string& instance, const Rational& lhs, const Rational& rhs,
             const Rational& margin);
  void violate(std::string instance, std::string lhs, std::string rhs, std::string kind);
  void absorb(BoundReport&& part);  // associative merge, order-preserving
};

inline constexpr std::size_t kMaxViolations = 32;

// Product inequality for extension counts of up-sets: with e(X) the number of
// linear extensions of the order induced on X (e(empty)=1),
//   e(U) e(V) <= e(U or V) e(U and V).
// u and v are up-set masks of p.  Returns true when the instance passes.
bool verify_fishburn(const FinitePoset& p, Mask u, Mask v, BoundReport& rep,
                     const std::string& instance_id);

// Removing a down-set d never hurts a minimal element x's chance of coming
// first: bottom(x in p) <= bottom(x in p minus d).  Computed twice — directly
// from bottom probabilities and through the four-count product reduction —
// and the two routes must give one identical rational answer.
bool verify_bottom_correlation(const FinitePoset& p, int x, Mask d, BoundReport& rep,
                               const std::string& instance_id);

// Log-concavity of every element's landing-position row r_i(x):
// r_i^2 >= r_{i-1} r_{i+1}, with no positive-zero-positive pattern.
bool verify_stanley(const FinitePoset& p, BoundReport& rep, const std::string& instance_id);

struct LowDownsetInstance {
  bool hypothesis_ok = true;
  std::string hypothesis_note;
  Rational lhs;           // P(first k elements inside Y union M)
  Rational product_bound; // prod_{j=1..k} (1 - (j-1) delta)
  Rational linear_bound;  // 1 - C(k,2) delta
  bool holds = false;
};

// Low-probability-start bound: given a family of small down-sets containing
// the empty set, whose one-step escapes all have bottom probability <= delta
// (hypothesis, checked), the first k elements stay inside the family's union
// plus its surrounding minimal layer with probability at least
// prod (1-(j-1)delta).
LowDownsetInstance verify_low_downset_bound(const FinitePoset& p,
                                            const std::vector<Mask>& z_family,
                                            const Rational& delta, int k,
                                            BoundReport* rep = nullptr,
                                            const std::string& instance_id = "");

// Horizon formula 10 k delta^-(k+1) log(5k / (eps delta^(k+1))), natural-log
// headline; the base-2 reading is reported alongside.
double q_formula(int k, double delta, double eps);
double q_formula_log2(int k, double delta, double eps);

struct QFormulaCheck {
  double q_ln = 0.0, q_log2 = 0.0;
  long long horizon = 0;  // ceil of the natural-log value
  Mask likely_set = 0;    // elements with bottom-k membership >= delta^(k+1)
  bool trivial = false;   // horizon >= n, containment is automatic
  Rational containment;   // P(likely set within the first min(horizon, n))
  Rational target;        // 1 - eps/8
  bool holds = false;
};

QFormulaCheck verify_q_formula(const FinitePoset& p, int k, const Rational& delta,
                               const Rational& eps, BoundReport* rep = nullptr,
                               const std::string& instance_id = "");

// One representative per isomorphism class of posets on 1..n_max elements
// (naturally-labeled generation, canonical-code dedup).  Class counts for
// n = 1..6: 1, 2, 5, 16, 63, 318.
std::vector<FinitePoset> all_posets_up_to(int n_max);

// Random order: each pair i<j related with probability 1/2, closed
// transitively.
FinitePoset random_closed_order(int n, Rng& rng);

struct SweepConfig {
  int max_n = 6;                // exhaustive over all classes up to this size
  std::size_t random_count = 10000;
  int random_n = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::size_t pairs_per_random_poset = 5;  // sampled instances per random poset
  std::size_t max_csv_rows = 100000;
};

BoundReport run_bound_suite(BoundSuite suite, const SweepConfig& cfg);

}  // namespace causetlab
