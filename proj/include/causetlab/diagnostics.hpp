#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causetlab/events.hpp"
#include "causetlab/golden.hpp"
#include "causetlab/growth.hpp"
#include "causetlab/invariance.hpp"

namespace causetlab {

// Default checkpoint schedule: doubling from 8 (8, 16, 32, ...), always
// including n_max, clipped to [2, n_max].
std::vector<int> default_checkpoints(int n_max);

struct TracePoint {
  int n = 0;
  Rational value;
};

// The conditional event measure along one growth history, evaluated exactly
// at increasing horizons, against the unconditional measure when known.
struct ConvergenceTrace {
  std::string kernel;
  BasicEvent event;
  std::vector<TracePoint> points;
  std::optional<double> target;  // mu(event), when available
  std::string target_str;        // exact form of the target
  bool truncated = false;
  std::string note;

  // Columns: n,value,target,abs_error (target columns empty when unknown).
  std::string csv() const;
};

// Exact unconditional measure of an event under an atomic kernel (sum of
// matching depth-k history probabilities); nullopt for kernels without a
// finite step law or when enumeration exceeds the cap.
std::optional<Golden> exact_event_measure(const GrowthKernel& kernel, const BasicEvent& e,
                                          std::size_t cap = 100000);

// Runs one trajectory of length n_max and evaluates the conditional measure
// of e at each checkpoint by exact down-set DP on the realized order.
// Checkpoints beyond the representable order size truncate the trace with a
// warning note.
ConvergenceTrace essentiality_trace(const GrowthKernel& kernel, const BasicEvent& e, int n_max,
                                    std::uint64_t seed, std::vector<int> checkpoints = {},
                                    std::optional<double> target = std::nullopt);

// Per-element bottom-k membership curves along one realized history.
struct PersistenceCurve {
  double label = 0.0;
  int first_seen = 0;  // 0-based step at which the element appeared
  std::vector<TracePoint> points;
  bool persistent = false;
};

struct PersistenceProfile {
  int k = 0;
  double threshold = 0.0;
  std::vector<int> checkpoints;
  std::vector<PersistenceCurve> curves;

  std::vector<double> v_hat() const;  // labels classified persistent
  // Columns: label,first_seen,n,value,persistent.
  std::string csv() const;
};

// Classifies each element of the history by whether its bottom-k membership
// probability stays above delta_hat on the tail (last half) of the
// checkpoint schedule.  Curves are exact DP values.
PersistenceProfile persistence_profile(const OmegaPrefix& omega, int k, double delta_hat = 0.15,
                                       std::vector<int> checkpoints = {});

// Skeleton-vs-layer shape of sampled histories: with V-hat the reference
// skeleton labels, counts histories whose first k elements contain a
// comparable pair entirely outside V-hat.
struct StructureReport {
  Verdict verdict = Verdict::inconclusive;
  std::uint64_t samples = 0;
  std::uint64_t violating = 0;       // histories with an off-skeleton comparable pair
  double violation_freq = 0.0;
  double bound = 0.0;                // epsilon + 4 SE
  double se = 0.0;
  double mean_layers = 0.0;          // mean count of distinct off-skeleton down-sets
  bool layers_inside_skeleton = true;  // off-skeleton down-sets contained in V-hat
  std::string note;

  Json to_json() const;
};

StructureReport structure_check(const GrowthKernel& kernel, int k, double epsilon,
                                std::size_t samples, std::uint64_t seed,
                                std::optional<std::vector<double>> v_hat = std::nullopt,
                                int jobs = 1);

// Distributional limit test: each trajectory's fraction of even-id elements
// (the first chain) after traj_len steps is one sample; the sample is tested
// against uniform(0,1) by Kolmogorov-Smirnov at significance 10^-3.
struct KsReport {
  Verdict verdict = Verdict::inconclusive;
  double statistic = 0.0;
  double critical = 0.0;
  std::size_t n_traj = 0;
  int traj_len = 0;
  std::string kernel;

  std::string text() const;
};

KsReport polya_limit_test(const GrowthKernel& kernel, std::size_t n_traj, int traj_len,
                          std::uint64_t seed, int jobs = 1);
KsReport polya_limit_test(std::size_t n_traj, int traj_len, std::uint64_t seed, int jobs = 1);

}  // namespace causetlab
