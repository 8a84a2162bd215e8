#include <iostream>

#include "CLI11.hpp"

#include "ferro/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ferrofluid relaxation-limit solver and estimate verifier"};
  app.require_subcommand(1);
  ferro::CliOptions o;
  std::uint64_t seed = 0;
  std::string output;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run configuration")->envname("FERRO_CONFIG");
    sub->add_option("--output", output, "output directory (overrides output.dir)")->envname("FERRO_OUTPUT");
    sub->add_option("--jobs", o.jobs, "concurrent jobs")->envname("FERRO_JOBS")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed (overrides seed)")->envname("FERRO_SEED");
    sub->add_flag("--quiet", o.quiet, "no progress output")->envname("FERRO_QUIET");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "integrate one configuration");
  CLI::App* sweep = app.add_subcommand("sweep-tau", "relaxation-time sweep against the limit system");
  CLI::App* verify = app.add_subcommand("verify", "linear-estimate and solver experiments");
  for (CLI::App* sub : {simulate, sweep, verify}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ferro::kExitOk : ferro::kExitConfig;
  }
  CLI::App* used = app.get_subcommands().front();
  if (used->count("--seed") > 0) o.seed = seed;
  if (used->count("--output") > 0) o.output_dir = output;

  if (used == simulate) return ferro::cmd_simulate(o);
  if (used == sweep) return ferro::cmd_sweep_tau(o);
  return ferro::cmd_verify(o);
}
