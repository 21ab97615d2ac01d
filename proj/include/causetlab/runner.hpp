#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "causetlab/events.hpp"
#include "causetlab/growth.hpp"

namespace causetlab {

// Raised for any malformed or semantically invalid experiment config; the
// CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunResult {
  int exit_code = 0;                   // 0 pass, 1 verdict failure (2 = config error, via throw)
  std::vector<std::string> artifacts;  // file names written inside out_dir
  std::string summary;                 // one-line outcome
};

// Builds the event described by {"bins": [...], "order": "<poset text>"}.
// Bins are {"lo": "<rational>", "hi": "<rational>"} intervals or
// {"atom": <double>} point masses.
BasicEvent event_from_json(const Json& spec);

// Runs one experiment described by `config` and writes its artifacts plus a
// manifest.json into out_dir (created if needed).  Artifacts are
// deterministic: the same config produces byte-identical files, and `jobs`
// only changes how work is scheduled, never what is written.  Throws
// ConfigError on bad configs.
RunResult run_experiment(const Json& config, const std::string& out_dir, int jobs = 1);

}  // namespace causetlab
