// Command-line front end: reads a JSON experiment config, dispatches it to
// the library, and writes deterministic artifacts plus a manifest.
//
// Exit codes: 0 = pass, 1 = a check failed (or an experiment could not
// finish), 2 = malformed config or command line.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "causetlab/runner.hpp"

namespace {

using causetlab::Json;

// Byte offset -> "line L, column C" for parse diagnostics.
std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "config error: cannot open " << path << "\n";
    std::exit(2);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::cerr << "config error: " << path << ": " << locate(text, e.byte) << ": " << e.what()
              << "\n";
    std::exit(2);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growth-process laboratory: exact and sampled checks for sequential random orders"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::int64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
  app.add_option("--config", config_path, "JSON experiment description")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory for artifacts (default: out)");
  app.add_option("--seed", seed, "override the config's seed")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--jobs", jobs,
                 "worker threads; 0 = all cores (scheduling only, never changes results)");

  struct Sub {
    const char* cmd;
    const char* task;
    const char* help;
  };
  const Sub subs[] = {
      {"simulate", "simulate", "grow histories and write them out"},
      {"check-invariance", "check-invariance", "relabeling-invariance and memorylessness checks"},
      {"check-dlr", "check-dlr", "consistency of the law with its conditional relabeling law"},
      {"diagnose", "diagnose", "convergence, persistence, structure, and limit diagnostics"},
      {"verify-bounds", "verify-bounds", "extension-counting inequality sweeps"},
      {"count-linext", "count-linext", "exact linear-extension count of a finite order"},
  };
  std::string suite;
  int max_n = 0;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.cmd, s.help);
    sub->fallthrough();  // let global flags appear after the subcommand
    if (std::string(s.cmd) == "verify-bounds") {
      sub->add_option("--suite", suite, "fishburn|correlation|stanley|lowdownset|qformula");
      sub->add_option("--max-n", max_n, "exhaustive sweep size cap");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the error (or requested help)
    return rc == 0 ? 0 : 2;     // fold CLI11's parse-error codes into "bad command line"
  }

  const CLI::App* picked = app.get_subcommands().front();
  std::string task;
  for (const Sub& s : subs)
    if (picked->get_name() == s.cmd) task = s.task;

  Json config = config_path.empty() ? Json::object() : load_config(config_path);
  if (config.contains("task") && config.at("task") != task) {
    std::cerr << "config error: config task \"" << config.at("task").get<std::string>()
              << "\" does not match subcommand \"" << task << "\"\n";
    return 2;
  }
  config["task"] = task;
  if (seed_given) config["seed"] = seed;
  if (!suite.empty()) config["suite"] = suite;
  if (max_n > 0) config["max_n"] = max_n;

  try {
    const causetlab::RunResult r = causetlab::run_experiment(config, out_dir, jobs);
    std::cout << r.summary << "\n";
    std::cout << "artifacts in " << out_dir << ":";
    for (const auto& name : r.artifacts) std::cout << " " << name;
    std::cout << "\n";
    return r.exit_code;
  } catch (const causetlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
