// Throughput comparison of the serial reference path (jobs = 1) against the
// OpenMP path of mc_map, on the workloads the laboratory actually batches:
// growing histories and sweeping random orders through an inequality check.
// The parallel path must also reproduce the serial results bit for bit.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "causetlab/bounds.hpp"
#include "causetlab/growth.hpp"
#include "causetlab/mc.hpp"
#include "causetlab/rng.hpp"

using namespace causetlab;

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double seconds(Fn&& fn) {
  const auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Sum of step ids along one grown history; cheap to compare across runs.
std::uint64_t trajectory_digest(const GrowthKernel& kernel, int n, std::uint64_t key) {
  const OmegaPrefix om = trajectory(kernel, n, key);
  std::uint64_t digest = 0;
  for (int id : om.element_ids) digest = mix64(digest + static_cast<std::uint64_t>(id) + 1);
  return digest;
}

void report(const char* name, std::size_t count, double serial_s, double parallel_s, bool same) {
  std::printf("%-28s %8zu items  serial %7.3f s  jobs=%d %7.3f s  speedup %5.2fx  %s\n", name,
              count, serial_s, effective_jobs(0), parallel_s, serial_s / parallel_s,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t scale = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

  int rc = 0;
  {
    const std::size_t count = 20000 * scale;
    const auto kernel = kernel_random_graph_order(Rational(1, 2));
    auto fn = [&](std::size_t i) { return trajectory_digest(*kernel, 16, stream_key(7, i)); };
    std::vector<std::uint64_t> serial, parallel;
    const double ts = seconds([&] { serial = mc_map<std::uint64_t>(count, 1, fn); });
    const double tp = seconds([&] { parallel = mc_map<std::uint64_t>(count, 0, fn); });
    const bool same = serial == parallel;
    report("grow histories (closure)", count, ts, tp, same);
    if (!same) rc = 1;
  }
  {
    const std::size_t count = 20000 * scale;
    const auto kernel = kernel_polya_urn();
    auto fn = [&](std::size_t i) { return trajectory_digest(*kernel, 64, stream_key(11, i)); };
    std::vector<std::uint64_t> serial, parallel;
    const double ts = seconds([&] { serial = mc_map<std::uint64_t>(count, 1, fn); });
    const double tp = seconds([&] { parallel = mc_map<std::uint64_t>(count, 0, fn); });
    const bool same = serial == parallel;
    report("grow histories (urn)", count, ts, tp, same);
    if (!same) rc = 1;
  }
  {
    const std::size_t count = 2000 * scale;
    auto fn = [&](std::size_t i) {
      Rng rng = seed_stream(13, i);
      const FinitePoset p = random_closed_order(9, rng);
      BoundReport rep;
      rep.suite = bound_suite_name(BoundSuite::stanley);
      verify_stanley(p, rep, "bench");
      return rep.comparisons;
    };
    std::vector<std::size_t> serial, parallel;
    const double ts = seconds([&] { serial = mc_map<std::size_t>(count, 1, fn); });
    const double tp = seconds([&] { parallel = mc_map<std::size_t>(count, 0, fn); });
    const bool same = serial == parallel;
    report("inequality sweep (stanley)", count, ts, tp, same);
    if (!same) rc = 1;
  }
  return rc;
}
