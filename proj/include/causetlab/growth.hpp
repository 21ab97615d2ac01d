#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "causetlab/golden.hpp"
#include "causetlab/models.hpp"
#include "causetlab/poset.hpp"
#include "causetlab/rational.hpp"
#include "causetlab/rng.hpp"

namespace causetlab {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Realized growth histories.
//
// An OmegaPrefix records the first k steps of a growth process: the label
// x_j placed at step j and the down-set D(j) (as positions into the
// history) chosen for it.  The prefix doubles as the process state: a kernel
// can resume from any prefix it could have produced.
struct OmegaPrefix {
  std::vector<double> labels;
  std::vector<std::vector<int>> delta;  // delta[j] = strict down-set of element j, sorted
  std::vector<int> element_ids;         // kernel-specific ids; -1 for fresh continuous draws
  std::string kernel_name;
  std::uint64_t seed = 0;
  std::size_t label_collisions = 0;

  int size() const { return static_cast<int>(labels.size()); }
  bool less(int i, int j) const;  // i strictly below j
  FinitePoset prefix_order(int n) const;

  void append(double label, std::vector<int> down, int element_id);

  // Text round-trip: '# key: value' header lines, then one line per element:
  //   k x_k D(k)
  // with k 1-based and D(k) comma-separated 1-based positions or '-'.
  std::string serialize() const;
  static OmegaPrefix parse(const std::string& text);
};

// One sampled growth step.
struct StepRecord {
  int element_id = -1;     // kernel-specific id; -1 when the element is a fresh draw
  std::vector<int> delta;  // strict down-set, as positions into the history
  double label = 0.0;
};

// One outcome of an atomic kernel's exact step law.
struct AtomicOption {
  int element_id = -1;
  std::vector<int> delta;
  double label = 0.0;
  Golden prob;
};

// ---------------------------------------------------------------------------
// Label laws for kernels that draw fresh labels: piecewise-uniform with
// rational endpoints and weights (atomless).
struct LabelPiece {
  Rational lo, hi, weight;
};

class LabelDistribution {
 public:
  LabelDistribution() : LabelDistribution(uniform01()) {}
  static LabelDistribution uniform01();
  static LabelDistribution piecewise(std::vector<LabelPiece> pieces);

  double sample(Rng& rng) const;
  // Measure of [lo, hi); exact.
  Rational measure_interval(const Rational& lo, const Rational& hi) const;
  const std::vector<LabelPiece>& pieces() const { return pieces_; }

  Json to_json() const;
  static LabelDistribution from_json(const Json& j);

 private:
  explicit LabelDistribution(std::vector<LabelPiece> pieces) : pieces_(std::move(pieces)) {}
  std::vector<LabelPiece> pieces_;
};

// ---------------------------------------------------------------------------
// Growth kernels: immutable one-step laws.  A kernel is "atomic" when single
// histories carry positive probability (its step law is a finite exact
// distribution); continuous-label kernels are not atomic and are checked by
// sampling instead.
class KernelState {
 public:
  virtual ~KernelState() = default;
  virtual std::unique_ptr<KernelState> clone() const = 0;
  virtual int count() const = 0;  // elements generated so far
};

class GrowthKernel {
 public:
  virtual ~GrowthKernel() = default;
  virtual std::string name() const = 0;
  virtual Json config_json() const = 0;
  virtual bool is_atomic() const = 0;

  virtual std::unique_ptr<KernelState> initial_state() const = 0;
  virtual StepRecord step(KernelState& state, Rng& rng) const = 0;

  // Cheap variant for statistics loops: advances the state and reports only
  // the element id (fixed-structure kernels avoid building the down-set).
  virtual int step_light(KernelState& state, Rng& rng) const;

  // Exact step law (atomic kernels only; throws std::logic_error otherwise).
  virtual std::vector<AtomicOption> step_distribution(const KernelState& state) const;
  // Applies a specific option (atomic kernels only).
  virtual void advance_with(KernelState& state, const AtomicOption& opt) const;

  // Rebuilds the state after the first `upto` elements of a history this
  // kernel could have produced; throws std::invalid_argument otherwise.
  virtual std::unique_ptr<KernelState> state_from_prefix(const OmegaPrefix& omega,
                                                         int upto) const = 0;

  // Ground-truth persistent labels (first `horizon` of them) for kernels
  // with a designed persistent skeleton; empty when none exists.
  virtual std::vector<double> persistent_labels(int horizon) const;
};

// Fixed-structure selection rules.
enum class SelectionRule {
  golden,        // <=2 choices; lower model index with the golden weight g
  half,          // <=2 choices; fair coin (control rule)
  chain_weight,  // two chains; chain 0 with weight q
  polya_urn,     // two chains; chain 0 with weight (m0+1)/(k+2)
};

std::unique_ptr<GrowthKernel> kernel_fixed(CausalSetGenerator model, SelectionRule rule,
                                           Rational param = Rational(0));
std::unique_ptr<GrowthKernel> kernel_ladder_golden();
std::unique_ptr<GrowthKernel> kernel_ladder_half();
std::unique_ptr<GrowthKernel> kernel_two_chains(const Rational& q);
std::unique_ptr<GrowthKernel> kernel_polya_urn();
std::unique_ptr<GrowthKernel> kernel_random_graph_order(const Rational& p);
std::unique_ptr<GrowthKernel> kernel_csg(std::vector<Rational> t_weights);
std::unique_ptr<GrowthKernel> kernel_iid_antichain(LabelDistribution rho = LabelDistribution());
std::unique_ptr<GrowthKernel> kernel_chain_with_marks(std::vector<Rational> p_levels,
                                                      Rational tail_ratio = Rational(1, 4),
                                                      std::vector<LabelDistribution> marks = {});
std::unique_ptr<GrowthKernel> kernel_marked_poset(FinitePoset q, Mask marked,
                                                  std::vector<Rational> mark_weights,
                                                  std::vector<LabelDistribution> mark_labels,
                                                  std::vector<Rational> base_weights = {});
std::unique_ptr<GrowthKernel> kernel_lw_subtree(int d, int max_size = 8);

// Kernel construction from a JSON config: {"kind": "...", ...}.
std::unique_ptr<GrowthKernel> make_kernel(const Json& config);

// ---------------------------------------------------------------------------
// Driving kernels.

// Runs n steps from scratch.  Reproducible: the whole history is a function
// of (kernel, n, seed).  Fresh-label collisions (vanishingly rare) are
// rejected and redrawn, and counted in the result.
OmegaPrefix trajectory(const GrowthKernel& kernel, int n, std::uint64_t seed);

// One-step public form: extend a resumable history by a single element.
OmegaPrefix step_once(const GrowthKernel& kernel, const OmegaPrefix& omega, Rng& rng);

// Exact probability that the process emits exactly this element-id sequence
// (atomic kernels only).  Zero for unreachable sequences.
Golden exact_stem_probability(const GrowthKernel& kernel, const std::vector<int>& element_ids);

// Same, matching a realized history by (label, down-set) at every step, so
// it also prices reorderings whose element ids are unknown.
Golden exact_stem_probability(const GrowthKernel& kernel, const OmegaPrefix& omega);

// Enumerates all histories of length `depth` with positive probability
// (atomic kernels), with their exact probabilities.
struct StemEntry {
  std::vector<int> ids;
  OmegaPrefix omega;
  Golden prob;
};
std::vector<StemEntry> enumerate_stems(const GrowthKernel& kernel, int depth,
                                       std::size_t cap = 100000);

// P(the induced order on the first k elements equals `order`) for the
// random-graph-order kernel with edge weight p: p^c (1-p)^b.
Rational rgo_order_probability(const FinitePoset& order, const Rational& p);

// Exact one-step law of the subset-weighted kernel at a given state order:
// distribution over the chosen down-set, aggregated over subsets with the
// same downward closure.  Weight of subset S is t_{|S|}.
std::vector<std::pair<Mask, Rational>> csg_step_distribution(const std::vector<Rational>& t,
                                                             const FinitePoset& state_order);

}  // namespace causetlab
