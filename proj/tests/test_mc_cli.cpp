#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "causetlab/growth.hpp"
#include "causetlab/mc.hpp"
#include "causetlab/rng.hpp"
#include "causetlab/runner.hpp"

using namespace causetlab;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("CAUSETLAB_CLI");
  REQUIRE_MESSAGE(p != nullptr, "CAUSETLAB_CLI must point at the command-line binary");
  return p;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "causetlab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  REQUIRE(bool(out));
  out << content;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "missing file " << file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the binary through the shell, capturing exit code, stdout, stderr.
CliRun run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path out_file = scratch / "stdout.txt";
  const fs::path err_file = scratch / "stderr.txt";
  const std::string cmd = "\"" + cli_path() + "\" " + args + " >\"" + out_file.string() +
                          "\" 2>\"" + err_file.string() + "\"";
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  REQUIRE(WIFEXITED(raw));
  CliRun r;
  r.code = WEXITSTATUS(raw);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// Every artifact in dir as name -> bytes (capture files excluded).
std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files[entry.path().filename().string()] = slurp(entry.path());
  }
  return files;
}

std::string ladder_poset_text(int n) {
  std::ostringstream out;
  out << "n=" << n << "\n";
  for (int i = 1; i + 2 <= n; ++i) out << i << "<" << i + 2 << "\n";
  for (int i = 1; i + 3 <= n; ++i) out << i << "<" << i + 3 << "\n";
  return out.str();
}

}  // namespace

TEST_CASE("effective_jobs resolves requests to at least one worker") {
  CHECK(effective_jobs(1) == 1);
  CHECK(effective_jobs(0) >= 1);
  CHECK(effective_jobs(-3) >= 1);
  // honoured verbatim when the library was built with OpenMP, else serial
  const int seven = effective_jobs(7);
  CHECK((seven == 7 || seven == 1));
}

TEST_CASE("mc_map parallel path reproduces the serial reference exactly") {
  auto fn = [](std::size_t i) { return seed_stream(99, i).next_u64(); };
  std::vector<std::uint64_t> by_hand(1000);
  for (std::size_t i = 0; i < by_hand.size(); ++i) by_hand[i] = fn(i);

  CHECK(mc_map<std::uint64_t>(1000, 1, fn) == by_hand);
  CHECK(mc_map<std::uint64_t>(1000, 4, fn) == by_hand);
  CHECK(mc_map<std::uint64_t>(1000, 0, fn) == by_hand);
  CHECK(mc_map<std::uint64_t>(0, 4, fn).empty());

  auto text_fn = [](std::size_t i) { return std::to_string(i * i); };
  CHECK(mc_map<std::string>(257, 1, text_fn) == mc_map<std::string>(257, 8, text_fn));
}

TEST_CASE("per-index random streams are stable and pairwise distinct") {
  CHECK(stream_key(5, 7) == stream_key(5, 7));
  CHECK(stream_key(5, 7) != stream_key(5, 8));
  CHECK(stream_key(5, 7) != stream_key(6, 7));
  std::set<std::uint64_t> keys;
  for (std::uint64_t i = 0; i < 200; ++i) keys.insert(stream_key(42, i));
  CHECK(keys.size() == 200);
  CHECK(seed_stream(3, 11).next_u64() == Rng(stream_key(3, 11)).next_u64());
}

TEST_CASE("run_experiment rejects bad configs and builds events from json") {
  const fs::path dir = fresh_dir("runner_unit");
  CHECK_THROWS_AS(run_experiment(Json{{"task", "nope"}}, (dir / "o").string()), ConfigError);
  CHECK_THROWS_AS(run_experiment(Json::array(), (dir / "o").string()), ConfigError);

  const Json spec{{"bins", Json::array({Json{{"lo", "0"}, {"hi", "1/2"}}, Json{{"atom", 0.25}}})},
                  {"order", "n=2\n1<2"}};
  const BasicEvent e = event_from_json(spec);
  CHECK(e.k() == 2);
  CHECK(e.bins[0].contains(0.3));
  CHECK_FALSE(e.bins[0].contains(0.6));
  CHECK(e.bins[1].contains(0.25));
  CHECK(e.order.less(0, 1));

  CHECK_THROWS_AS(event_from_json(Json{{"bins", Json::array()}}), ConfigError);
  CHECK_THROWS_AS(event_from_json(Json{{"bins", Json::array({Json{{"lo", "x"}, {"hi", "1"}}})}}),
                  ConfigError);
}

TEST_CASE("cli count-linext writes the exact extension count") {
  const fs::path dir = fresh_dir("count_linext");
  const Json config{{"poset", ladder_poset_text(10)}};
  write_text(dir / "config.json", config.dump(2));

  const fs::path out = dir / "out";
  const CliRun r = run_cli("count-linext --config \"" + (dir / "config.json").string() +
                               "\" --out \"" + out.string() + "\"",
                           dir);
  CHECK(r.code == 0);
  CHECK(r.out.find("89") != std::string::npos);
  CHECK(slurp(out / "count.txt") == "89\n");

  const Json manifest = Json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("artifact_version") == 1);
  CHECK(manifest.at("exit_code") == 0);
  CHECK(manifest.at("config").at("task") == "count-linext");
  const auto& outputs = manifest.at("outputs");
  CHECK(std::find(outputs.begin(), outputs.end(), Json("count.txt")) != outputs.end());
}

TEST_CASE("cli simulate artifacts are byte-identical across re-runs and job counts") {
  const fs::path dir = fresh_dir("simulate_repro");
  const Json config{{"kernel", Json{{"kind", "random_graph_order"}, {"p", "1/2"}}},
                    {"n", 12},
                    {"count", 3},
                    {"seed", 5}};
  write_text(dir / "config.json", config.dump(2));
  const std::string base = "simulate --config \"" + (dir / "config.json").string() + "\" --out \"";

  const fs::path a = dir / "a", b = dir / "b", c = dir / "c";
  CHECK(run_cli(base + a.string() + "\"", dir).code == 0);
  CHECK(run_cli(base + b.string() + "\"", dir).code == 0);
  CHECK(run_cli(base + c.string() + "\" --jobs 8", dir).code == 0);

  const auto bytes_a = dir_bytes(a);
  CHECK(bytes_a.size() == 4);  // three trajectories + manifest
  CHECK(bytes_a == dir_bytes(b));
  CHECK(bytes_a == dir_bytes(c));

  // distinct per-trajectory streams, each a parseable history
  CHECK(bytes_a.at("trajectory_0.txt") != bytes_a.at("trajectory_1.txt"));
  const OmegaPrefix omega = OmegaPrefix::parse(bytes_a.at("trajectory_0.txt"));
  CHECK(omega.size() == 12);
}

TEST_CASE("cli seed override after the subcommand changes the grown histories") {
  const fs::path dir = fresh_dir("simulate_seed");
  const Json config{{"kernel", Json{{"kind", "ladder_golden"}}}, {"n", 10}, {"seed", 5}};
  write_text(dir / "config.json", config.dump(2));
  const std::string cfg = (dir / "config.json").string();

  const fs::path a = dir / "a", b = dir / "b";
  CHECK(run_cli("simulate --config \"" + cfg + "\" --out \"" + a.string() + "\"", dir).code == 0);
  CHECK(run_cli("simulate --config \"" + cfg + "\" --out \"" + b.string() + "\" --seed 6", dir)
            .code == 0);

  CHECK(slurp(a / "trajectory.txt") != slurp(b / "trajectory.txt"));
  CHECK(Json::parse(slurp(a / "manifest.json")).at("config").at("seed") == 5);
  CHECK(Json::parse(slurp(b / "manifest.json")).at("config").at("seed") == 6);
}

TEST_CASE("cli check-invariance maps verdicts to exit codes") {
  const fs::path dir = fresh_dir("check_invariance");

  write_text(dir / "pass.json",
             Json{{"kernel", Json{{"kind", "ladder_golden"}}}, {"k_max", 4}}.dump());
  const fs::path pass_out = dir / "pass_out";
  const CliRun pass = run_cli("check-invariance --config \"" + (dir / "pass.json").string() +
                                  "\" --out \"" + pass_out.string() + "\"",
                              dir);
  CHECK(pass.code == 0);
  CHECK(pass.out.find("pass") != std::string::npos);
  CHECK(Json::parse(slurp(pass_out / "report.json")).at("verdict") == "pass");

  write_text(dir / "fail.json",
             Json{{"kernel", Json{{"kind", "ladder_half"}}}, {"k_max", 3}}.dump());
  const fs::path fail_out = dir / "fail_out";
  const CliRun fail = run_cli("check-invariance --config \"" + (dir / "fail.json").string() +
                                  "\" --out \"" + fail_out.string() + "\"",
                              dir);
  CHECK(fail.code == 1);
  CHECK(fail.out.find("fail") != std::string::npos);
  const Json rep = Json::parse(slurp(fail_out / "report.json"));
  CHECK(rep.at("verdict") == "fail");
  REQUIRE_FALSE(rep.at("witnesses").empty());
  CHECK(rep.at("witnesses").at(0).at("lhs") == "1/4");
  CHECK(rep.at("witnesses").at(0).at("rhs") == "1/2");
}

TEST_CASE("cli check-dlr and diagnose run end to end") {
  const fs::path dir = fresh_dir("dlr_diagnose");

  const Json event{{"bins", Json::array({Json{{"lo", "0"}, {"hi", "1/2"}},
                                         Json{{"lo", "1/2"}, {"hi", "1"}}})},
                   {"order", "n=2\n1<2"}};
  write_text(dir / "dlr.json", Json{{"kernel", Json{{"kind", "two_chains"}, {"q", "1/3"}}},
                                    {"event", event},
                                    {"n", 3}}
                                   .dump());
  const fs::path dlr_out = dir / "dlr_out";
  const CliRun dlr = run_cli("check-dlr --config \"" + (dir / "dlr.json").string() +
                                 "\" --out \"" + dlr_out.string() + "\"",
                             dir);
  CHECK(dlr.code == 0);
  CHECK(Json::parse(slurp(dlr_out / "report.json")).at("verdict") == "pass");

  write_text(dir / "polya.json",
             Json{{"diagnostic", "polya-limit"}, {"n_traj", 200}, {"traj_len", 100}, {"seed", 2}}
                 .dump());
  const fs::path polya_out = dir / "polya_out";
  const CliRun polya = run_cli("diagnose --config \"" + (dir / "polya.json").string() +
                                   "\" --out \"" + polya_out.string() + "\"",
                               dir);
  CHECK(polya.code == 0);
  CHECK(slurp(polya_out / "report.txt").find("pass") != std::string::npos);
}

TEST_CASE("cli verify-bounds reports are independent of the job count") {
  const fs::path dir = fresh_dir("bounds_jobs");
  const Json config{{"suite", "correlation"},
                    {"max_n", 4},
                    {"random_count", 200},
                    {"random_n", 7},
                    {"seed", 3}};
  write_text(dir / "config.json", config.dump(2));
  const std::string cfg = (dir / "config.json").string();

  const fs::path serial = dir / "serial", wide = dir / "wide";
  CHECK(run_cli("verify-bounds --config \"" + cfg + "\" --out \"" + serial.string() + "\"", dir)
            .code == 0);
  CHECK(run_cli("verify-bounds --config \"" + cfg + "\" --out \"" + wide.string() +
                    "\" --jobs 4",
                dir)
            .code == 0);
  CHECK(dir_bytes(serial) == dir_bytes(wide));
  CHECK(Json::parse(slurp(serial / "report.json")).at("violations").empty());
}

TEST_CASE("cli rejects malformed configs and command lines with exit code 2") {
  const fs::path dir = fresh_dir("bad_input");

  write_text(dir / "broken.json", "{ \"task\": ");
  const CliRun parse = run_cli("simulate --config \"" + (dir / "broken.json").string() +
                                   "\" --out \"" + (dir / "o1").string() + "\"",
                               dir);
  CHECK(parse.code == 2);
  CHECK(parse.err.find("config error") != std::string::npos);
  CHECK(parse.err.find("line 1") != std::string::npos);
  CHECK(parse.err.find("column") != std::string::npos);

  write_text(dir / "mismatch.json", Json{{"task", "simulate"}}.dump());
  const CliRun mismatch = run_cli("check-dlr --config \"" + (dir / "mismatch.json").string() +
                                      "\" --out \"" + (dir / "o2").string() + "\"",
                                  dir);
  CHECK(mismatch.code == 2);
  CHECK(mismatch.err.find("does not match") != std::string::npos);

  write_text(dir / "missing.json", Json{{"kernel", Json{{"kind", "polya_urn"}}}}.dump());
  const CliRun missing = run_cli("simulate --config \"" + (dir / "missing.json").string() +
                                     "\" --out \"" + (dir / "o3").string() + "\"",
                                 dir);
  CHECK(missing.code == 2);
  CHECK(missing.err.find("config error") != std::string::npos);

  write_text(dir / "kernel.json", Json{{"kernel", Json{{"kind", "nope"}}}, {"n", 4}}.dump());
  const CliRun kernel = run_cli("simulate --config \"" + (dir / "kernel.json").string() +
                                    "\" --out \"" + (dir / "o4").string() + "\"",
                                dir);
  CHECK(kernel.code == 2);
  CHECK(kernel.err.find("config error") != std::string::npos);

  CHECK(run_cli("no-such-subcommand", dir).code == 2);
  CHECK(run_cli("", dir).code == 2);
  CHECK(run_cli("--help", dir).code == 0);
}
