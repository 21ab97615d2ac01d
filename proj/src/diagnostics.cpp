#include "causetlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "causetlab/linext.hpp"
#include "causetlab/mc.hpp"
#include "causetlab/stats.hpp"

namespace causetlab {

std::vector<int> default_checkpoints(int n_max) {
  if (n_max < 2) throw std::invalid_argument("default_checkpoints: n_max >= 2");
  std::vector<int> cps;
  for (int n = 8; n < n_max; n *= 2) cps.push_back(n);
  cps.push_back(n_max);
  if (cps.front() > n_max) cps.assign(1, n_max);
  return cps;
}

std::string ConvergenceTrace::csv() const {
  std::ostringstream os;
  os << "n,value,target,abs_error\n";
  os.precision(17);
  for (const auto& pt : points) {
    os << pt.n << "," << to_double(pt.value) << ",";
    if (target)
      os << *target << "," << std::fabs(to_double(pt.value) - *target);
    else
      os << ",";
    os << "\n";
  }
  return os.str();
}

std::optional<Golden> exact_event_measure(const GrowthKernel& kernel, const BasicEvent& e,
                                          std::size_t cap) {
  e.validate();
  if (!kernel.is_atomic()) return std::nullopt;
  try {
    Golden mu(0);
    for (const auto& stem : enumerate_stems(kernel, e.k(), cap))
      if (e.contains(stem.omega)) mu += stem.prob;
    return mu;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

ConvergenceTrace essentiality_trace(const GrowthKernel& kernel, const BasicEvent& e, int n_max,
                                    std::uint64_t seed, std::vector<int> checkpoints,
                                    std::optional<double> target) {
  e.validate();
  if (n_max < e.k()) throw std::invalid_argument("essentiality_trace: n_max >= event length");
  ConvergenceTrace trace;
  trace.kernel = kernel.name();
  trace.event = e;
  if (checkpoints.empty()) checkpoints = default_checkpoints(n_max);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.front() < e.k() || checkpoints.back() > n_max)
    throw std::invalid_argument("essentiality_trace: checkpoints must lie in [event k, n_max]");

  if (target) {
    trace.target = target;
  } else if (const auto mu = exact_event_measure(kernel, e)) {
    trace.target = mu->to_double();
    trace.target_str = mu->str();
  }

  const int representable = std::min(n_max, max_poset_n());
  const OmegaPrefix omega = trajectory(kernel, representable, seed);
  for (int n : checkpoints) {
    if (n > representable) {
      trace.truncated = true;
      trace.note = "trace truncated at n=" + std::to_string(representable) +
                   ": larger realized orders exceed the exact-DP representation cap";
      break;
    }
    trace.points.push_back({n, relabel_event_probability(omega, n, e)});
  }
  return trace;
}

std::vector<double> PersistenceProfile::v_hat() const {
  std::vector<double> v;
  for (const auto& c : curves)
    if (c.persistent) v.push_back(c.label);
  return v;
}

std::string PersistenceProfile::csv() const {
  std::ostringstream os;
  os << "label,first_seen,n,value,persistent\n";
  os.precision(17);
  for (const auto& c : curves)
    for (const auto& pt : c.points)
      os << c.label << "," << c.first_seen << "," << pt.n << "," << to_double(pt.value) << ","
         << (c.persistent ? 1 : 0) << "\n";
  return os.str();
}

PersistenceProfile persistence_profile(const OmegaPrefix& omega, int k, double delta_hat,
                                       std::vector<int> checkpoints) {
  const int n = omega.size();
  if (k < 1) throw std::invalid_argument("persistence_profile: k >= 1");
  if (checkpoints.empty()) checkpoints = default_checkpoints(n);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.size() < 3)
    throw std::invalid_argument("persistence_profile: need at least 3 checkpoints");
  if (checkpoints.front() < 1 || checkpoints.back() > n)
    throw std::invalid_argument("persistence_profile: checkpoints must lie in [1, history length]");

  PersistenceProfile prof;
  prof.k = k;
  prof.threshold = delta_hat;
  prof.checkpoints = checkpoints;

  // One exact position table per checkpoint serves every element's curve.
  std::vector<std::vector<std::vector<Rational>>> tables;
  tables.reserve(checkpoints.size());
  for (int cp : checkpoints) tables.push_back(position_distribution(omega.prefix_order(cp)));

  const std::size_t tail_from = checkpoints.size() / 2;  // last half of the schedule
  for (int x = 0; x < n; ++x) {
    PersistenceCurve curve;
    curve.label = omega.labels[static_cast<std::size_t>(x)];
    curve.first_seen = x;
    bool persistent = true;
    bool tail_covered = false;
    for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
      const int cp = checkpoints[ci];
      if (x >= cp) continue;  // element not yet present at this horizon
      const auto& rows = tables[ci];
      Rational value(0);
      const int upto = std::min(k, cp);
      for (int pos = 0; pos < upto; ++pos) value += rows[static_cast<std::size_t>(x)][static_cast<std::size_t>(pos)];
      curve.points.push_back({cp, value});
      if (ci >= tail_from) {
        tail_covered = true;
        if (!(to_double(value) > delta_hat)) persistent = false;
      }
    }
    curve.persistent = tail_covered && persistent;
    prof.curves.push_back(std::move(curve));
  }
  return prof;
}

Json StructureReport::to_json() const {
  Json j;
  j["verdict"] = verdict_str(verdict);
  j["samples"] = samples;
  j["violating"] = violating;
  j["violation_freq"] = violation_freq;
  j["bound"] = bound;
  j["se"] = se;
  j["mean_layers"] = mean_layers;
  j["layers_inside_skeleton"] = layers_inside_skeleton;
  j["note"] = note;
  return j;
}

StructureReport structure_check(const GrowthKernel& kernel, int k, double epsilon,
                                std::size_t samples, std::uint64_t seed,
                                std::optional<std::vector<double>> v_hat, int jobs) {
  if (k < 1) throw std::invalid_argument("structure_check: k >= 1");
  if (samples == 0) throw std::invalid_argument("structure_check: samples >= 1");
  std::vector<double> skeleton = v_hat ? std::move(*v_hat) : kernel.persistent_labels(1 << 16);
  std::unordered_set<double> vset(skeleton.begin(), skeleton.end());

  struct Acc {
    std::uint64_t violating = 0;  // off-skeleton element with off-skeleton ancestor
    std::uint64_t layers = 0;     // distinct off-skeleton down-sets, summed
  };
  const std::size_t batches = std::min<std::size_t>(64, samples);
  const auto accs = mc_map<Acc>(batches, jobs, [&](std::size_t b) {
    Acc a;
    const std::size_t lo = b * samples / batches;
    const std::size_t hi = (b + 1) * samples / batches;
    for (std::size_t i = lo; i < hi; ++i) {
      const OmegaPrefix om = trajectory(kernel, k, stream_key(seed, i));
      std::vector<bool> in_v(static_cast<std::size_t>(k));
      for (int t = 0; t < k; ++t)
        in_v[static_cast<std::size_t>(t)] = vset.count(om.labels[static_cast<std::size_t>(t)]) > 0;
      bool bad = false;
      for (int t = 0; t < k && !bad; ++t) {
        if (in_v[static_cast<std::size_t>(t)]) continue;
        for (int s : om.delta[static_cast<std::size_t>(t)]) {
          if (!in_v[static_cast<std::size_t>(s)]) {
            bad = true;  // comparable pair with both ends off the skeleton
            break;
          }
        }
      }
      if (bad) ++a.violating;
      std::map<std::vector<int>, int> groups;
      for (int t = 0; t < k; ++t)
        if (!in_v[static_cast<std::size_t>(t)]) ++groups[om.delta[static_cast<std::size_t>(t)]];
      a.layers += groups.size();
    }
    return a;
  });
  Acc total;
  for (const auto& a : accs) {
    total.violating += a.violating;
    total.layers += a.layers;
  }

  StructureReport rep;
  rep.samples = samples;
  rep.violating = total.violating;
  rep.violation_freq = static_cast<double>(total.violating) / static_cast<double>(samples);
  rep.se = std::sqrt(std::max(0.0, rep.violation_freq * (1.0 - rep.violation_freq) /
                                       static_cast<double>(samples)));
  rep.bound = epsilon + 4.0 * rep.se;
  rep.mean_layers = static_cast<double>(total.layers) / static_cast<double>(samples);
  rep.layers_inside_skeleton = total.violating == 0;
  rep.verdict = rep.violation_freq <= rep.bound ? Verdict::pass : Verdict::fail;
  std::ostringstream note;
  note << "skeleton size " << vset.size() << "; off-skeleton comparable-pair frequency "
       << rep.violation_freq << " vs bound " << rep.bound;
  rep.note = note.str();
  return rep;
}

std::string KsReport::text() const {
  std::ostringstream os;
  os << "ks_limit_test on " << kernel << ": " << verdict_str(verdict) << "\n"
     << "  trajectories: " << n_traj << " of length " << traj_len << "\n"
     << "  statistic:    " << statistic << "\n"
     << "  critical:     " << critical << " (significance 1e-3)\n";
  return os.str();
}

KsReport polya_limit_test(const GrowthKernel& kernel, std::size_t n_traj, int traj_len,
                          std::uint64_t seed, int jobs) {
  if (n_traj < 10) throw std::invalid_argument("polya_limit_test: n_traj >= 10");
  if (traj_len < 1) throw std::invalid_argument("polya_limit_test: traj_len >= 1");
  auto fractions = mc_map<double>(n_traj, jobs, [&](std::size_t i) {
    Rng rng = seed_stream(seed, i);
    auto state = kernel.initial_state();
    int evens = 0;
    for (int s = 0; s < traj_len; ++s)
      if (kernel.step_light(*state, rng) % 2 == 0) ++evens;
    return static_cast<double>(evens) / static_cast<double>(traj_len);
  });
  KsReport rep;
  rep.kernel = kernel.name();
  rep.n_traj = n_traj;
  rep.traj_len = traj_len;
  rep.statistic = ks_uniform_statistic(std::move(fractions));
  rep.critical = ks_critical(n_traj, 1e-3);
  rep.verdict = rep.statistic <= rep.critical ? Verdict::pass : Verdict::fail;
  return rep;
}

KsReport polya_limit_test(std::size_t n_traj, int traj_len, std::uint64_t seed, int jobs) {
  const auto kernel = kernel_polya_urn();
  return polya_limit_test(*kernel, n_traj, traj_len, seed, jobs);
}

}  // namespace causetlab
