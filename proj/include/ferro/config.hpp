#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ferro/external_field.hpp"
#include "ferro/integrator.hpp"
#include "ferro/params.hpp"
#include "ferro/state_model.hpp"

namespace ferro {

using Json = nlohmann::ordered_json;

inline constexpr int kConfigVersion = 1;

/// Invalid configuration; the message starts with the dotted key at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key(key) {}
  std::string key;
};

/// Initial data of one component: "zero", "taylor-green" (velocity only) or
/// "random-band" with Hdot^{1/2} norm equal to amplitude.
struct ComponentInit {
  std::string preset = "zero";
  std::uint64_t seed = 0;
  double s_decay = 2.0;
  double amplitude = 0.0;
};

struct ExperimentConfig {
  std::vector<double> tau_list{1e-1, 1e-2, 1e-3, 1e-4};
  int trials = 24;
  /// Verifier experiments to run; empty runs all of them.
  std::vector<std::string> select;
  /// Target for sup |H - G/(1+chi0)| at the smallest tau; 0 picks
  /// 1e-2 * sup_t |G_F/(1+chi0)|_{H^1/2}.
  double h_target = 0.0;
  double min_reduction = 10.0;
  double gamma = 1.0;
  double mu = 1.0;
  double picard_u0_norm = 1e-2;
  double picard_t_end = 0.25;
  int picard_steps = 50;
  double etd_t_end = 0.5;
  int etd_steps = 20;
};

struct RunConfig {
  int version = kConfigVersion;
  int n = 16;
  double box_length = 6.283185307179586;
  bool dealias = true;
  Params params{1.0, 1.0, 1e-2, 1.0};
  TimeGrid time{1.0, 200};
  double eps_fraction = 0.1;
  ComponentInit u, m, r;
  std::vector<ForceMode> field_modes;
  ExperimentConfig experiment;
  std::string output_dir = "out";
  int checkpoint_every = 0;
  std::uint64_t seed = 1;

  double eps() const { return eps_fraction * time.t_end; }
};

/// Parse and validate. Missing keys keep their defaults; unknown keys are errors.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
/// Checks beyond the per-key types (ranges, band membership, ordering).
void validate(const RunConfig& c);
/// Canonical echo of every setting, used in reports.
nlohmann::ordered_json config_json(const RunConfig& c);

GridPtr make_grid(const RunConfig& c);
State initial_state(const RunConfig& c, const GridPtr& g);
ExternalField external_field(const RunConfig& c, const GridPtr& g);

}  // namespace ferro
