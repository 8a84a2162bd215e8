#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ferro {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitBlowUp = 2, kExitAssertion = 3 };

/// Command-line settings; unset optionals leave the config file in charge.
struct CliOptions {
  std::string config_path;
  std::optional<std::string> output_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// Writes norms.csv, summary.json and, with output.checkpoint_every > 0,
/// checkpoint_<step>.bin into the output directory.
int cmd_simulate(const CliOptions& o);
/// Writes sweep_tau.json with the per-tau rows of both sweep experiments.
int cmd_sweep_tau(const CliOptions& o);
/// Writes <experiment>.json for each selected experiment and verify.json.
int cmd_verify(const CliOptions& o);

}  // namespace ferro
