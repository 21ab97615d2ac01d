// Exit gate: ten numbered end-to-end requirements, one verdict line each.
// Every requirement runs at its stated tolerance and runtime budget; the
// process exits nonzero if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "causetlab/bounds.hpp"
#include "causetlab/diagnostics.hpp"
#include "causetlab/events.hpp"
#include "causetlab/golden.hpp"
#include "causetlab/growth.hpp"
#include "causetlab/invariance.hpp"
#include "causetlab/models.hpp"
#include "causetlab/runner.hpp"

using namespace causetlab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20260816;

void need(std::vector<std::string>& problems, bool ok, const std::string& what) {
  if (!ok) problems.push_back(what);
}

struct Gate {
  int failed = 0;
  int total = 0;

  void criterion(int id, double budget_s, const char* what,
                 const std::function<void(std::vector<std::string>&)>& body) {
    ++total;
    std::vector<std::string> problems;
    const auto t0 = Clock::now();
    try {
      body(problems);
    } catch (const std::exception& e) {
      problems.push_back(std::string("unexpected exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget_s > 0 && dt > budget_s) {
      std::ostringstream s;
      s.precision(2);
      s << std::fixed << "runtime " << dt << " s exceeds the " << budget_s << " s budget";
      problems.push_back(s.str());
    }
    std::printf("criterion %2d: %s  (%6.2f s)  %s\n", id, problems.empty() ? "PASS" : "FAIL", dt,
                what);
    for (const auto& p : problems) std::printf("              - %s\n", p.c_str());
    if (!problems.empty()) ++failed;
    std::fflush(stdout);
  }
};

bool same_order(const FinitePoset& a, const FinitePoset& b) {
  if (a.n != b.n) return false;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      if (a.less(i, j) != b.less(i, j)) return false;
  return true;
}

// Complete isomorphism invariant for 3-element orders: the sorted multiset of
// (strict down-set size, strict up-set size) pairs.
std::vector<std::pair<int, int>> degree_signature(const FinitePoset& q) {
  std::vector<std::pair<int, int>> sig;
  for (int i = 0; i < q.n; ++i) {
    int below = 0, above = 0;
    for (int j = 0; j < q.n; ++j) {
      if (q.less(j, i)) ++below;
      if (q.less(i, j)) ++above;
    }
    sig.emplace_back(below, above);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

OmegaPrefix natural_ladder_history(int n) {
  const CausalSetGenerator model = CausalSetGenerator::ladder();
  OmegaPrefix om;
  for (int i = 0; i < n; ++i) om.append(model.label(i), model.down_set(i), i);
  return om;
}

std::vector<BasicEvent> full_bin_events(int k_max) {
  std::vector<BasicEvent> battery;
  for (int k = 1; k <= k_max; ++k) {
    for (const auto& q : standard_suborders(k)) {
      BasicEvent e;
      for (int i = 0; i < k; ++i) e.bins.push_back(LabelBin::interval(Rational(0), Rational(1)));
      e.order = q;
      battery.push_back(e);
    }
  }
  return battery;
}

std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    files[entry.path().filename().string()] = buf.str();
  }
  return files;
}

Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

int main() {
  Gate gate;

  gate.criterion(1, 1.0, "both two-element ladder stems carry exact weight 1 - g under the golden rule",
                 [](std::vector<std::string>& out) {
    const auto kernel = kernel_ladder_golden();
    const Golden p01 = exact_stem_probability(*kernel, std::vector<int>{0, 1});
    const Golden p10 = exact_stem_probability(*kernel, std::vector<int>{1, 0});
    const Golden want = Golden(Rational(1)) - Golden::g();
    need(out, p01 == p10, "the two stem orderings disagree");
    need(out, p01 == want, "stem weight differs from 1 - g");
    need(out, Golden::g() * Golden::g() == want, "g^2 != 1 - g in the exact arithmetic");
  });

  gate.criterion(2, 5.0, "depth-18 conditional weight of the bottom ladder element is within 1e-3 of g",
                 [](std::vector<std::string>& out) {
    const OmegaPrefix om = natural_ladder_history(18);
    BasicEvent e;
    e.bins.push_back(LabelBin::atom_of(CausalSetGenerator::ladder().label(0)));
    e.order = FinitePoset::antichain(1);
    const Rational nu = relabel_event_probability(om, 18, e);
    const double err = std::fabs(to_double(nu) - Golden::g().to_double());
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << "deviation from g is " << err;
    need(out, err < 1e-3, s.str() + " (tolerance 1e-3)");
  });

  gate.criterion(3, 30.0,
                 "10^5 sampled 3-element induced orders match the closure law within 4 sigma "
                 "(p = 0.2, 0.5, 0.8)",
                 [](std::vector<std::string>& out) {
    const auto suborders = standard_suborders(3);
    const std::size_t n = 100000;
    for (long tenths : {2L, 5L, 8L}) {
      const Rational p = frac(tenths, 10);
      const auto kernel = kernel_random_graph_order(p);
      std::vector<std::size_t> counts(suborders.size(), 0);
      std::size_t classified = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const FinitePoset q = trajectory(*kernel, 3, stream_key(kSeed + tenths, i)).prefix_order(3);
        for (std::size_t s = 0; s < suborders.size(); ++s) {
          if (same_order(q, suborders[s])) {
            ++counts[s];
            ++classified;
            break;
          }
        }
      }
      need(out, classified == n,
           "p=" + std::to_string(tenths) + "/10: some induced order matched no listed suborder");

      std::vector<double> expect(suborders.size());
      for (std::size_t s = 0; s < suborders.size(); ++s) {
        expect[s] = to_double(rgo_order_probability(suborders[s], p));
        const double mean = static_cast<double>(n) * expect[s];
        const double sd = std::sqrt(mean * (1.0 - expect[s]));
        const double z = std::fabs(static_cast<double>(counts[s]) - mean) / sd;
        if (z > 4.0) {
          std::ostringstream s2;
          s2.precision(2);
          s2 << std::fixed << "p=" << tenths << "/10 cell " << s << ": |z| = " << z << " > 4";
          out.push_back(s2.str());
        }
      }
      for (std::size_t a = 0; a < suborders.size(); ++a) {
        for (std::size_t b = a + 1; b < suborders.size(); ++b) {
          if (degree_signature(suborders[a]) != degree_signature(suborders[b])) continue;
          const double qa = expect[a], qb = expect[b];
          const double var = static_cast<double>(n) * (qa + qb - (qa - qb) * (qa - qb));
          const double z =
              std::fabs(static_cast<double>(counts[a]) - static_cast<double>(counts[b])) /
              std::sqrt(var);
          if (z > 4.0) {
            std::ostringstream s2;
            s2.precision(2);
            s2 << std::fixed << "p=" << tenths << "/10 isomorphic cells " << a << "," << b
               << ": |z| = " << z << " > 4";
            out.push_back(s2.str());
          }
        }
      }
    }
  });

  gate.criterion(4, 120.0,
                 "exact relabeling invariance holds for the golden and two-chain laws to stem "
                 "length 8, the half control fails at 1/4 vs 1/2, and the subtree process fails "
                 "the binned check while staying memoryless",
                 [](std::vector<std::string>& out) {
    need(out, check_invariance_exact(*kernel_ladder_golden(), 8).verdict == Verdict::pass,
         "golden ladder rule failed the exact check");
    need(out, check_invariance_exact(*kernel_two_chains(frac(1, 3)), 8).verdict == Verdict::pass,
         "two-chain law q=1/3 failed the exact check");
    need(out, check_invariance_exact(*kernel_two_chains(frac(1, 2)), 8).verdict == Verdict::pass,
         "two-chain law q=1/2 failed the exact check");

    const CheckReport half = check_invariance_exact(*kernel_ladder_half(), 8);
    need(out, half.verdict == Verdict::fail, "half control unexpectedly passed the exact check");
    bool witness = false;
    for (const auto& w : half.witnesses)
      if (w.lhs == "1/4" && w.rhs == "1/2") witness = true;
    need(out, witness, "half control produced no 1/4 vs 1/2 witness");

    const auto lw = kernel_lw_subtree(2, 8);
    const auto battery = dyadic_event_battery(2, 4, 4);
    const CheckReport binned = check_invariance_binned(*lw, battery, 100000, kSeed, 1);
    need(out, binned.verdict == Verdict::fail,
         "binned check did not flag the subtree process");
    need(out, check_order_markov(*lw, 6).verdict == Verdict::pass,
         "subtree process unexpectedly failed the memorylessness check");
  });

  gate.criterion(5, 60.0,
                 "conditional-relabeling consistency is exact for the golden and two-chain laws "
                 "over the full k <= 3 and stem-length <= 6 batteries; the half control shows a "
                 "nonzero gap",
                 [](std::vector<std::string>& out) {
    const auto full = full_bin_events(3);
    struct Named {
      const char* tag;
      std::unique_ptr<GrowthKernel> kernel;
    };
    Named kernels[] = {{"golden", kernel_ladder_golden()},
                       {"two-chains q=1/3", kernel_two_chains(frac(1, 3))},
                       {"two-chains q=1/2", kernel_two_chains(frac(1, 2))}};
    for (const auto& named : kernels) {
      std::size_t checked = 0;
      for (const auto& e : full) {
        if (check_dlr_exact(*named.kernel, e, 6).verdict != Verdict::pass) {
          out.push_back(std::string(named.tag) + ": consistency failed on " + e.str());
          return;
        }
        ++checked;
      }
      for (const auto& e : stem_event_battery(*named.kernel, 6)) {
        if (check_dlr_exact(*named.kernel, e, 6).verdict != Verdict::pass) {
          out.push_back(std::string(named.tag) + ": consistency failed on " + e.str());
          return;
        }
        ++checked;
      }
      need(out, checked >= 50, std::string(named.tag) + ": battery unexpectedly small");
    }

    const auto half = kernel_ladder_half();
    BasicEvent atoms;
    atoms.bins.push_back(LabelBin::atom_of(CausalSetGenerator::ladder().label(0)));
    atoms.bins.push_back(LabelBin::atom_of(CausalSetGenerator::ladder().label(1)));
    atoms.order = FinitePoset::antichain(2);
    const CheckReport rep = check_dlr_exact(*half, atoms, 2);
    need(out, rep.verdict == Verdict::fail, "half control unexpectedly consistent");
    need(out, !rep.witnesses.empty() &&
                  std::fabs(rep.witnesses[0].lhs_value - rep.witnesses[0].rhs_value) > 1e-6,
         "half control gap not visible in the witness");
  });

  gate.criterion(6, 120.0,
                 "10^4 urn trajectories of length 10^3 pass a KS test against uniform(0,1) at "
                 "significance 1e-3; the biased two-chain control fails it",
                 [](std::vector<std::string>& out) {
    const KsReport urn = polya_limit_test(10000, 1000, kSeed, 1);
    {
      std::ostringstream s;
      s.precision(4);
      s << std::fixed << "urn statistic " << urn.statistic << " vs critical " << urn.critical;
      need(out, urn.verdict == Verdict::pass, s.str());
    }
    const auto biased = kernel_two_chains(frac(3, 10));
    const KsReport neg = polya_limit_test(*biased, 10000, 1000, kSeed, 1);
    need(out, neg.verdict == Verdict::fail, "biased control passed the KS test");
  });

  gate.criterion(7, 300.0,
                 "zero counterexamples in the fishburn, correlation, and stanley sweeps over all "
                 "orders on <= 6 elements plus 10^4 random 10-element orders",
                 [](std::vector<std::string>& out) {
    for (BoundSuite suite : {BoundSuite::fishburn, BoundSuite::correlation, BoundSuite::stanley}) {
      SweepConfig cfg;
      cfg.max_n = 6;
      cfg.random_count = 10000;
      cfg.random_n = 10;
      cfg.seed = kSeed;
      cfg.jobs = 1;
      const BoundReport rep = run_bound_suite(suite, cfg);
      need(out, rep.violations.empty(),
           bound_suite_name(suite) + ": " + std::to_string(rep.violations.size()) + " violations");
      need(out, rep.comparisons > 10000,
           bound_suite_name(suite) + ": suspiciously few comparisons");
    }
  });

  gate.criterion(8, 10.0,
                 "exact low-down-set mass dominates the product bound on every chain fixture, "
                 "including 8/15 >= 1/2 at t=8, k=2, delta=1/2",
                 [](std::vector<std::string>& out) {
    SweepConfig cfg;
    const BoundReport rep = run_bound_suite(BoundSuite::lowdownset, cfg);
    need(out, rep.verdict() == Verdict::pass, "a fixture violated the bound");
    need(out, rep.hypothesis_failures == 0, "a fixture failed its hypothesis");

    const FinitePoset p = CausalSetGenerator::disjoint_chains(2, 8).prefix(16);
    const LowDownsetInstance inst =
        verify_low_downset_bound(p, std::vector<Mask>{Mask(0)}, frac(1, 2), 2);
    need(out, inst.hypothesis_ok, "headline fixture rejected its own hypothesis");
    need(out, inst.lhs == frac(8, 15), "headline left side is not 8/15");
    need(out, inst.product_bound == frac(1, 2), "headline product bound is not 1/2");
    need(out, inst.holds && inst.lhs >= inst.product_bound, "headline inequality failed");
  });

  gate.criterion(9, 60.0,
                 "over 10^4 trajectories the chain-with-marks law keeps comparable pairs outside "
                 "the persistent skeleton below 0.1 + 4 SE at k=3; the antichain law shows none",
                 [](std::vector<std::string>& out) {
    const auto marks = kernel_chain_with_marks({Rational(1), frac(1, 2)});
    const StructureReport a = structure_check(*marks, 3, 0.1, 10000, kSeed, std::nullopt, 1);
    {
      std::ostringstream s;
      s.precision(4);
      s << std::fixed << "chain-with-marks frequency " << a.violation_freq << " vs bound "
        << a.bound;
      need(out, a.verdict == Verdict::pass && a.violation_freq <= a.bound, s.str());
    }
    const auto iid = kernel_iid_antichain();
    const StructureReport b = structure_check(*iid, 3, 0.1, 10000, kSeed, std::nullopt, 1);
    need(out, b.violating == 0, "antichain law produced a comparable pair");
  });

  gate.criterion(10, 0.0,
                 "experiment artifacts are byte-identical across re-runs and across --jobs 8 vs "
                 "serial execution",
                 [](std::vector<std::string>& out) {
    const fs::path base = fs::temp_directory_path() / "causetlab_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);

    const std::vector<std::pair<std::string, Json>> configs = {
        {"simulate", Json{{"task", "simulate"},
                          {"kernel", Json{{"kind", "random_graph_order"}, {"p", "1/2"}}},
                          {"n", 12},
                          {"count", 3},
                          {"seed", 5}}},
        {"binned", Json{{"task", "check-invariance"},
                        {"mode", "binned"},
                        {"kernel", Json{{"kind", "random_graph_order"}, {"p", "1/2"}}},
                        {"battery", Json{{"kind", "dyadic"}, {"k_min", 2}, {"k_max", 3},
                                         {"denom", 4}}},
                        {"samples", 20000},
                        {"seed", 9},
                        {"oracle", true}}},
        {"bounds", Json{{"task", "verify-bounds"},
                        {"suite", "correlation"},
                        {"max_n", 4},
                        {"random_count", 500},
                        {"random_n", 8},
                        {"seed", 3}}}};

    for (const auto& [tag, config] : configs) {
      const fs::path first = base / (tag + "_first");
      const fs::path again = base / (tag + "_again");
      const fs::path wide = base / (tag + "_wide");
      run_experiment(config, first.string(), 1);
      run_experiment(config, again.string(), 1);
      run_experiment(config, wide.string(), 8);
      need(out, dir_bytes(first) == dir_bytes(again), tag + ": re-run changed the artifacts");
      need(out, dir_bytes(first) == dir_bytes(wide), tag + ": worker count changed the artifacts");
    }
    fs::remove_all(base);
  });

  std::printf("acceptance: %d/%d criteria passed\n", gate.total - gate.failed, gate.total);
  return gate.failed == 0 ? 0 : 1;
}
