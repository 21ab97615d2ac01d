#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causetlab/events.hpp"
#include "causetlab/golden.hpp"
#include "causetlab/growth.hpp"
#include "causetlab/linext.hpp"

namespace causetlab {

enum class Verdict { pass, fail, inconclusive };

std::string verdict_str(Verdict v);

// One failed (or flagged) comparison, with both sides and the sampling error
// scale when the comparison was statistical (se == 0 means exact).
struct Witness {
  std::string event;
  std::string relabeling;
  std::string lhs, rhs;
  double lhs_value = 0.0, rhs_value = 0.0;
  double se = 0.0;
  std::uint64_t samples = 0;
};

struct CheckReport {
  std::string check;
  std::string kernel;
  Verdict verdict = Verdict::inconclusive;
  std::uint64_t comparisons = 0;  // informative comparisons performed
  std::uint64_t skipped = 0;      // vacuous comparisons (nothing observed / identity)
  std::vector<Witness> witnesses;
  std::string note;

  Json to_json() const;
  std::string table() const;
};

inline constexpr std::size_t kMaxWitnesses = 16;

// Exact relabeling invariance for kernels with a finite step law: for every
// reachable history of depth <= k_max and every linear extension lambda of
// its realized order (only adjacent incomparable transpositions when
// transpositions_only), the probability of growing the lambda-reordered
// history must equal the original's.  Comparisons are exact.
CheckReport check_invariance_exact(const GrowthKernel& kernel, int k_max,
                                   bool transpositions_only = false,
                                   std::size_t stem_cap = 100000);

// Optional closed-form event measure, used to add estimate-vs-exact
// comparisons for kernels whose law is known analytically.
using EventOracle = std::function<std::optional<Rational>(const BasicEvent&)>;

// Closed-form measure of a basic event under the independent-uniform-label /
// p-biased-order law: product of bin widths times p^covers (1-p)^incomparable
// of the event order.
Rational rgo_event_probability(const BasicEvent& e, const Rational& p);

// Sampled relabeling invariance over an interval-bin event battery: all
// event probabilities are estimated from one batch of `samples` histories
// via a counting table, each event is compared against every nontrivial
// relabeling of itself, and differences are flagged beyond z * SE where z is
// the Bonferroni threshold for the whole family at significance alpha,
// floored at 4.
CheckReport check_invariance_binned(const GrowthKernel& kernel,
                                    const std::vector<BasicEvent>& battery,
                                    std::size_t samples, std::uint64_t seed, int jobs = 1,
                                    double alpha = 1e-3, const EventOracle& oracle = nullptr);

// Exact memorylessness-in-the-order check: reachable histories of equal
// depth are grouped by realized element set; every history in a group must
// induce the identical one-step law (keyed by the grown element).
CheckReport check_order_markov(const GrowthKernel& kernel, int k_max,
                               std::size_t stem_cap = 100000);

// Exact conditional relabeling measure: the probability that a uniformly
// random linear extension of omega's first-n realized order rearranges the
// history into the event.  Computed by dynamic programming over the down-set
// lattice of the realized order (no enumeration of extensions).
Rational relabel_event_probability(const OmegaPrefix& omega, int n, const BasicEvent& e);

// Exact stability of the conditional measure under adjacent transpositions
// of event slots: comparable adjacent pairs act as the identity and are
// skipped; incomparable ones must leave the conditional measure unchanged.
CheckReport check_transposition_stability(const OmegaPrefix& omega, int n,
                                          const std::vector<BasicEvent>& events);

// Exact consistency of the unconditional law with its own conditional
// relabeling law: mu(E) must equal the probability-weighted average of
// relabel_event_probability over all reachable depth-n histories.
CheckReport check_dlr_exact(const GrowthKernel& kernel, const BasicEvent& e, int n,
                            std::size_t stem_cap = 100000);

// Sampled version for kernels without a finite stem law: the paired
// difference indicator(omega in E) - conditional(omega) must average to zero
// within 4 standard errors.
CheckReport check_dlr_mc(const GrowthKernel& kernel, const BasicEvent& e, int n,
                         std::size_t samples, std::uint64_t seed, int jobs = 1);

}  // namespace causetlab
