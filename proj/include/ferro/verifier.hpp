#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ferro/external_field.hpp"
#include "ferro/integrator.hpp"
#include "ferro/params.hpp"
#include "ferro/state_model.hpp"

namespace ferro {

using Json = nlohmann::ordered_json;

/// One measured experiment. pass is the conjunction of the recorded checks,
/// each a pure comparison of a measured quantity with a stated tolerance.
struct ExperimentResult {
  struct Check {
    std::string what;
    bool ok = false;
  };

  std::string name;
  Json inputs = Json::object();
  std::string inputs_digest;
  Json measured = Json::object();
  std::vector<Check> checks;
  bool pass = false;
  double tolerance = 0.0;

  void check(std::string what, bool ok);
  /// Fix the digest and the pass flag; call once all checks are in.
  void finalize();
  Json to_json() const;
};

/// FNV-1a 64-bit digest, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ParabolicConfig {
  double gamma = 1.0;
  double mu = 1.0;
  int trials = 24;
  std::uint64_t seed = 1;
  std::vector<int> resolutions{8, 16};
  double t_end = 1.0;
  int n_steps = 200;
  double slope_tolerance = 0.02;
};
/// Linear parabolic estimates: scaling exponents by closed-form single-mode
/// solutions, and ratios to the estimate right-hand sides (C = 1) for random data.
ExperimentResult verify_parabolic_smoothing(const ParabolicConfig& c);

/// Decay of the multiplier (|k|^2/(gamma + mu|k|^2))^{alpha/2} applied to g
/// over gamma = 10^0 ... 10^8.
ExperimentResult verify_multiplier_decay(double mu, double alpha, const VectorField& g);

struct DampingConfig {
  VectorField w0;
  VectorField F1;  // enters with envelope cos(3t)
  VectorField F2;  // enters with envelope e^{-t}
  double sigma = 0.05;
  std::vector<double> gamma_list{0.0, 1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
  double t_end = 1.0;
  double eps = 0.1;
  int n_steps = 400;
  double match_tolerance = 0.01;
};
/// Damped parabolic problem: e^{-gamma t} for pure data, and decay in gamma
/// of sup_{(eps,T)} |w|_{H^1/2} under forcing.
ExperimentResult verify_damping_estimate(const DampingConfig& c);

struct SweepSetup {
  State U0;
  ExternalField F;
  Params base;
  std::vector<double> tau_list{1e-1, 1e-2, 1e-3, 1e-4};
  TimeGrid grid;
  double eps = 0.1;
  /// Required bound on sup |H - G_F/(1+chi0)|_{H^1/2} at the smallest tau.
  double h_target = 0.0;
  /// Required ratio between the (m, r) discrepancies at the largest and the
  /// smallest tau.
  double min_reduction = 10.0;
  int jobs = 1;

  explicit SweepSetup(ExternalField f) : F(std::move(f)) {}
};

/// Metrics of one run of the full system.
struct SweepRow {
  double tau = 0.0;
  double sup_mr = 0.0;       // sup |(m, r)|_{H^1/2}
  double sup_M_dev = 0.0;    // sup |M - chi0/(1+chi0) G_F|_{H^1/2}
  double sup_H_dev = 0.0;    // sup |H - 1/(1+chi0) G_F|_{H^1/2}
  double sup_u_dev = 0.0;    // sup |u - u_bar|_{H^1/2}
  double grad_u_dev = 0.0;   // |grad(u - u_bar)|_{L^2 H^1/2}
  double g_tau = 0.0;        // |G^tau|_{L^2 H^-1/2}
  double max_sector_drift = 0.0;
};
/// Runs the system for every tau (all sups over nodes in [eps, T]).
/// u_bar comes from one limit Navier-Stokes solve.
std::vector<SweepRow> sweep_rows(const SweepSetup& s);

ExperimentResult run_tau_sweep(const SweepSetup& s, const std::vector<SweepRow>& rows);
ExperimentResult verify_limit_convergence(const SweepSetup& s, const std::vector<SweepRow>& rows);

/// Dimensionless groups of the smallness conditions, reported without verdict.
ExperimentResult measure_smallness_diagnostics(const State& U0, const ExternalField& F,
                                               const Params& p, const TimeGrid& grid);

/// Ratio |uv|_{L^2} / (|u|_{H^1/2} |v|_{H^1}) over random pairs at each grid size.
ExperimentResult verify_product_rule(int trials, std::uint64_t seed, const std::vector<int>& sizes);

/// P(G_F . grad G_F) = 0 for random F, and forced and unforced limit runs agree.
ExperimentResult verify_limit_identity(const VectorField& u0, const ExternalField& F,
                                       const Params& p, const TimeGrid& grid,
                                       std::uint64_t seed, double tolerance = 1e-12);

/// Picard contraction ratios and agreement with ETD in L^inf_T H^1/2.
ExperimentResult verify_picard_contraction(const State& U0, const ExternalField& F, const Params& p,
                                           const TimeGrid& grid, double tol, int max_iter,
                                           double agreement = 1e-4);

/// Self-convergence order of ETD2RK from three step sizes n, 2n, 4n.
ExperimentResult verify_etd_order(const State& U0, const ExternalField& F, const Params& p,
                                  double t_end, int n_coarse, double order_tolerance = 0.1);

/// Left-hand side of the (m, r) energy bound along a simulation.
ExperimentResult energy_bound(const State& U0, const ExternalField& F, const Params& p,
                              const TimeGrid& grid);

}  // namespace ferro
