#include "causetlab/runner.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "causetlab/bounds.hpp"
#include "causetlab/diagnostics.hpp"
#include "causetlab/events.hpp"
#include "causetlab/invariance.hpp"
#include "causetlab/linext.hpp"
#include "causetlab/mc.hpp"
#include "causetlab/rng.hpp"

namespace causetlab {
namespace {

const Json& need(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("missing config key \"") + key + "\"");
  return *it;
}

std::string need_str(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_string()) throw ConfigError(std::string("config key \"") + key + "\" must be a string");
  return v.get<std::string>();
}

long long need_int(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_number_integer())
    throw ConfigError(std::string("config key \"") + key + "\" must be an integer");
  return v.get<long long>();
}

long long opt_int(const Json& j, const char* key, long long dflt) {
  return j.contains(key) ? need_int(j, key) : dflt;
}

std::string opt_str(const Json& j, const char* key, const std::string& dflt) {
  return j.contains(key) ? need_str(j, key) : dflt;
}

double opt_double(const Json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config key \"") + key + "\" must be a number");
  return v.get<double>();
}

std::uint64_t opt_seed(const Json& j, long long dflt = 1) {
  const long long s = opt_int(j, "seed", dflt);
  return static_cast<std::uint64_t>(s);
}

Rational rational_field(const Json& v, const char* what) {
  try {
    if (v.is_string()) return rational_from_string(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
  } catch (const std::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
  throw ConfigError(std::string(what) + " must be a rational string like \"1/2\" or an integer");
}

std::unique_ptr<GrowthKernel> kernel_field(const Json& config) {
  const Json& spec = need(config, "kernel");
  if (!spec.is_object()) throw ConfigError("\"kernel\" must be an object with a \"kind\"");
  try {
    return make_kernel(spec);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad kernel config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad kernel config: ") + e.what());
  }
}

std::string ensure_nl(std::string s) {
  if (s.empty() || s.back() != '\n') s.push_back('\n');
  return s;
}

int verdict_exit(Verdict v) { return v == Verdict::pass ? 0 : 1; }

struct ArtifactWriter {
  std::filesystem::path dir;
  std::vector<std::string> names;

  explicit ArtifactWriter(const std::string& out_dir) : dir(out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
  }

  void put(const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
    names.push_back(name);
  }

  void put_report(const CheckReport& rep) {
    put("report.json", ensure_nl(rep.to_json().dump(2)));
    put("report.txt", ensure_nl(rep.table()));
  }
};

std::vector<int> checkpoints_field(const Json& config, const char* key) {
  std::vector<int> cps;
  if (!config.contains(key)) return cps;
  const Json& v = config.at(key);
  if (!v.is_array()) throw ConfigError(std::string("\"") + key + "\" must be an array of integers");
  for (const Json& x : v) {
    if (!x.is_number_integer())
      throw ConfigError(std::string("\"") + key + "\" must be an array of integers");
    cps.push_back(x.get<int>());
  }
  return cps;
}

// ---- tasks ------------------------------------------------------------

RunResult task_simulate(const Json& config, ArtifactWriter& w, int jobs) {
  auto kernel = kernel_field(config);
  const long long n = need_int(config, "n");
  if (n < 1) throw ConfigError("\"n\" must be at least 1");
  const long long count = opt_int(config, "count", 1);
  if (count < 1) throw ConfigError("\"count\" must be at least 1");
  const std::uint64_t seed = opt_seed(config);

  const auto texts =
      mc_map<std::string>(static_cast<std::size_t>(count), jobs, [&](std::size_t i) {
        return trajectory(*kernel, static_cast<int>(n), stream_key(seed, i)).serialize();
      });
  if (count == 1) {
    w.put("trajectory.txt", texts[0]);
  } else {
    for (std::size_t i = 0; i < texts.size(); ++i)
      w.put("trajectory_" + std::to_string(i) + ".txt", texts[i]);
  }

  RunResult r;
  r.summary = "grew " + std::to_string(count) + " history(ies) of length " + std::to_string(n) +
              " under " + kernel->name();
  return r;
}

RunResult task_check_invariance(const Json& config, ArtifactWriter& w, int jobs) {
  auto kernel = kernel_field(config);
  const std::string mode = opt_str(config, "mode", "exact");
  CheckReport rep;
  if (mode == "exact" || mode == "transpositions") {
    const long long k_max = need_int(config, "k_max");
    if (k_max < 1) throw ConfigError("\"k_max\" must be at least 1");
    rep = check_invariance_exact(*kernel, static_cast<int>(k_max), mode == "transpositions");
  } else if (mode == "order-markov") {
    const long long k_max = need_int(config, "k_max");
    if (k_max < 1) throw ConfigError("\"k_max\" must be at least 1");
    rep = check_order_markov(*kernel, static_cast<int>(k_max));
  } else if (mode == "binned") {
    const Json& bat = need(config, "battery");
    std::vector<BasicEvent> battery;
    const std::string kind = need_str(bat, "kind");
    if (kind == "dyadic") {
      battery = dyadic_event_battery(static_cast<int>(opt_int(bat, "k_min", 1)),
                                     static_cast<int>(need_int(bat, "k_max")),
                                     static_cast<int>(need_int(bat, "denom")));
    } else if (kind == "stems") {
      battery = stem_event_battery(*kernel, static_cast<int>(need_int(bat, "k_max")));
    } else {
      throw ConfigError("battery kind must be \"dyadic\" or \"stems\"");
    }
    const long long samples = opt_int(config, "samples", 100000);
    if (samples < 2) throw ConfigError("\"samples\" must be at least 2");
    const double alpha = opt_double(config, "alpha", 1e-3);
    EventOracle oracle;
    if (config.contains("oracle") && config.at("oracle").get<bool>()) {
      const Json& kspec = config.at("kernel");
      if (opt_str(kspec, "kind", "") != "random_graph_order")
        throw ConfigError("\"oracle\": true needs a random_graph_order kernel");
      const Rational p = rational_field(need(kspec, "p"), "kernel.p");
      oracle = [p](const BasicEvent& e) -> std::optional<Rational> {
        return rgo_event_probability(e, p);
      };
    }
    rep = check_invariance_binned(*kernel, battery, static_cast<std::size_t>(samples),
                                  opt_seed(config), jobs, alpha, oracle);
  } else {
    throw ConfigError("mode must be exact, transpositions, order-markov, or binned");
  }

  w.put_report(rep);
  RunResult r;
  r.exit_code = verdict_exit(rep.verdict);
  r.summary = rep.check + " on " + rep.kernel + ": " + verdict_str(rep.verdict);
  return r;
}

RunResult task_check_dlr(const Json& config, ArtifactWriter& w, int jobs) {
  auto kernel = kernel_field(config);
  BasicEvent e = event_from_json(need(config, "event"));
  const long long n = need_int(config, "n");
  if (n < e.k()) throw ConfigError("\"n\" must be at least the event length");
  const std::string mode = opt_str(config, "mode", "exact");
  CheckReport rep;
  if (mode == "exact") {
    rep = check_dlr_exact(*kernel, e, static_cast<int>(n));
  } else if (mode == "mc") {
    const long long samples = opt_int(config, "samples", 100000);
    if (samples < 2) throw ConfigError("\"samples\" must be at least 2");
    rep = check_dlr_mc(*kernel, e, static_cast<int>(n), static_cast<std::size_t>(samples),
                       opt_seed(config), jobs);
  } else {
    throw ConfigError("mode must be exact or mc");
  }

  w.put_report(rep);
  RunResult r;
  r.exit_code = verdict_exit(rep.verdict);
  r.summary = rep.check + " on " + rep.kernel + ": " + verdict_str(rep.verdict);
  return r;
}

RunResult task_diagnose(const Json& config, ArtifactWriter& w, int jobs) {
  const std::string what = need_str(config, "diagnostic");
  RunResult r;
  if (what == "essentiality") {
    auto kernel = kernel_field(config);
    BasicEvent e = event_from_json(need(config, "event"));
    const long long n_max = need_int(config, "n_max");
    std::optional<double> target;
    if (config.contains("target")) target = opt_double(config, "target", 0.0);
    const auto trace = essentiality_trace(*kernel, e, static_cast<int>(n_max), opt_seed(config),
                                          checkpoints_field(config, "checkpoints"), target);
    w.put("trace.csv", ensure_nl(trace.csv()));
    std::ostringstream s;
    s.precision(17);
    s << "conditional-measure trace for " << trace.event.str() << " under " << trace.kernel;
    if (!trace.points.empty()) s << "; final value " << to_double(trace.points.back().value);
    if (trace.target) s << "; target " << *trace.target;
    if (trace.truncated) s << "; " << trace.note;
    r.summary = s.str();
  } else if (what == "persistence") {
    auto kernel = kernel_field(config);
    const long long n = need_int(config, "n");
    const long long k = need_int(config, "k");
    if (n < 1 || k < 1) throw ConfigError("\"n\" and \"k\" must be at least 1");
    const double delta_hat = opt_double(config, "delta_hat", 0.15);
    const OmegaPrefix omega = trajectory(*kernel, static_cast<int>(n), opt_seed(config));
    const auto prof = persistence_profile(omega, static_cast<int>(k), delta_hat,
                                          checkpoints_field(config, "checkpoints"));
    w.put("persistence.csv", ensure_nl(prof.csv()));
    std::ostringstream s;
    s << prof.v_hat().size() << " of " << prof.curves.size() << " labels persistent at threshold "
      << prof.threshold << " (bottom-" << prof.k << " mass)";
    r.summary = s.str();
  } else if (what == "structure") {
    auto kernel = kernel_field(config);
    const long long k = need_int(config, "k");
    const long long samples = need_int(config, "samples");
    if (k < 1 || samples < 1) throw ConfigError("\"k\" and \"samples\" must be at least 1");
    const double epsilon = opt_double(config, "epsilon", 0.1);
    std::optional<std::vector<double>> v_hat;
    if (config.contains("v_hat")) {
      const Json& v = config.at("v_hat");
      if (!v.is_array()) throw ConfigError("\"v_hat\" must be an array of labels");
      v_hat.emplace();
      for (const Json& x : v) v_hat->push_back(x.get<double>());
    }
    const auto rep = structure_check(*kernel, static_cast<int>(k), epsilon,
                                     static_cast<std::size_t>(samples), opt_seed(config), v_hat,
                                     jobs);
    w.put("report.json", ensure_nl(rep.to_json().dump(2)));
    r.exit_code = verdict_exit(rep.verdict);
    std::ostringstream s;
    s.precision(6);
    s << "off-skeleton comparability " << rep.violation_freq << " vs bound " << rep.bound << ": "
      << verdict_str(rep.verdict);
    r.summary = s.str();
  } else if (what == "polya-limit") {
    const long long n_traj = need_int(config, "n_traj");
    const long long traj_len = need_int(config, "traj_len");
    if (n_traj < 10) throw ConfigError("\"n_traj\" must be at least 10");
    if (traj_len < 1) throw ConfigError("\"traj_len\" must be at least 1");
    KsReport rep;
    if (config.contains("kernel")) {
      auto kernel = kernel_field(config);
      rep = polya_limit_test(*kernel, static_cast<std::size_t>(n_traj),
                             static_cast<int>(traj_len), opt_seed(config), jobs);
    } else {
      rep = polya_limit_test(static_cast<std::size_t>(n_traj), static_cast<int>(traj_len),
                             opt_seed(config), jobs);
    }
    w.put("report.txt", ensure_nl(rep.text()));
    r.exit_code = verdict_exit(rep.verdict);
    std::ostringstream s;
    s.precision(6);
    s << "KS statistic " << rep.statistic << " vs critical " << rep.critical << ": "
      << verdict_str(rep.verdict);
    r.summary = s.str();
  } else {
    throw ConfigError("diagnostic must be essentiality, persistence, structure, or polya-limit");
  }
  return r;
}

RunResult task_verify_bounds(const Json& config, ArtifactWriter& w, int jobs) {
  BoundSuite suite;
  try {
    suite = parse_bound_suite(need_str(config, "suite"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  SweepConfig cfg;
  cfg.max_n = static_cast<int>(opt_int(config, "max_n", cfg.max_n));
  cfg.random_count = static_cast<std::size_t>(opt_int(config, "random_count",
                                                      static_cast<long long>(cfg.random_count)));
  cfg.random_n = static_cast<int>(opt_int(config, "random_n", cfg.random_n));
  cfg.seed = opt_seed(config, static_cast<long long>(cfg.seed));
  cfg.pairs_per_random_poset = static_cast<std::size_t>(
      opt_int(config, "pairs_per_random_poset", static_cast<long long>(cfg.pairs_per_random_poset)));
  cfg.max_csv_rows =
      static_cast<std::size_t>(opt_int(config, "max_csv_rows",
                                       static_cast<long long>(cfg.max_csv_rows)));
  cfg.jobs = jobs;
  if (cfg.max_n < 1 || cfg.max_n > 8) throw ConfigError("\"max_n\" must be in [1, 8]");
  if (cfg.random_n < 1 || cfg.random_n > max_poset_n())
    throw ConfigError("\"random_n\" out of range");

  const BoundReport rep = run_bound_suite(suite, cfg);
  w.put("report.json", ensure_nl(rep.to_json().dump(2)));
  w.put("margins.csv", ensure_nl(rep.csv()));

  RunResult r;
  r.exit_code = verdict_exit(rep.verdict());
  std::ostringstream s;
  s << bound_suite_name(suite) << ": " << rep.comparisons << " comparisons over " << rep.instances
    << " instances, " << rep.violations.size() << " violations";
  if (rep.hypothesis_failures > 0)
    s << ", " << rep.hypothesis_failures << " hypothesis failures (not counted as violations)";
  s << ": " << verdict_str(rep.verdict());
  r.summary = s.str();
  return r;
}

RunResult task_count_linext(const Json& config, ArtifactWriter& w) {
  FinitePoset p;
  try {
    p = parse_poset_text(need_str(config, "poset"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  BigInt count;
  try {
    count = count_extensions(p);
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("poset too large for exact counting: ") + e.what());
  }
  w.put("count.txt", count.get_str() + "\n");
  RunResult r;
  r.summary = "linear extensions of the " + std::to_string(p.n) + "-element order: " +
              count.get_str();
  return r;
}

}  // namespace

BasicEvent event_from_json(const Json& spec) {
  if (!spec.is_object()) throw ConfigError("\"event\" must be an object");
  BasicEvent e;
  const Json& bins = need(spec, "bins");
  if (!bins.is_array() || bins.empty())
    throw ConfigError("event \"bins\" must be a non-empty array");
  for (const Json& b : bins) {
    if (b.contains("atom")) {
      if (!b.at("atom").is_number()) throw ConfigError("bin \"atom\" must be a number");
      e.bins.push_back(LabelBin::atom_of(b.at("atom").get<double>()));
    } else {
      e.bins.push_back(LabelBin::interval(rational_field(need(b, "lo"), "bin lo"),
                                          rational_field(need(b, "hi"), "bin hi")));
    }
  }
  const std::string order_text = opt_str(spec, "order", "");
  try {
    if (order_text.empty()) {
      e.order = FinitePoset::antichain(static_cast<int>(e.bins.size()));
    } else {
      e.order = parse_poset_text(order_text);
    }
    e.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("bad event: ") + ex.what());
  }
  return e;
}

RunResult run_experiment(const Json& config, const std::string& out_dir, int jobs) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  const std::string task = need_str(config, "task");

  ArtifactWriter w(out_dir);
  RunResult r;
  try {
    if (task == "simulate") {
      r = task_simulate(config, w, jobs);
    } else if (task == "check-invariance") {
      r = task_check_invariance(config, w, jobs);
    } else if (task == "check-dlr") {
      r = task_check_dlr(config, w, jobs);
    } else if (task == "diagnose") {
      r = task_diagnose(config, w, jobs);
    } else if (task == "verify-bounds") {
      r = task_verify_bounds(config, w, jobs);
    } else if (task == "count-linext") {
      r = task_count_linext(config, w);
    } else {
      throw ConfigError("unknown task \"" + task + "\"");
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }

  Json manifest;
  manifest["artifact_version"] = 1;
  Json echo = config;
  echo.erase("jobs");  // scheduling detail; artifacts must not depend on it
  manifest["config"] = echo;
  manifest["outputs"] = w.names;
  manifest["summary"] = r.summary;
  manifest["exit_code"] = r.exit_code;
  w.put("manifest.json", ensure_nl(manifest.dump(2)));

  r.artifacts = w.names;
  return r;
}

}  // namespace causetlab
