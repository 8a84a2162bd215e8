#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ferro/external_field.hpp"
#include "ferro/params.hpp"
#include "ferro/propagator.hpp"
#include "ferro/state_model.hpp"

namespace ferro {

/// Uniform nodes t_i = i t_end / n_steps.
struct TimeGrid {
  double t_end = 1.0;
  int n_steps = 100;

  double dt() const { return t_end / n_steps; }
  std::vector<double> nodes() const;
  void validate() const;
};

class BlowUpError : public std::runtime_error {
 public:
  explicit BlowUpError(double t)
      : std::runtime_error("non-finite state at t = " + std::to_string(t)), time(t) {}
  double time;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double ratio, int iteration)
      : std::runtime_error("Picard iteration diverges: contraction ratio " + std::to_string(ratio) +
                           " at iteration " + std::to_string(iteration)),
        ratio(ratio),
        iteration(iteration) {}
  double ratio;
  int iteration;
};

struct SolveReport {
  std::vector<double> times;
  std::vector<double> hs12_u, hs12_m, hs12_r;
  std::vector<double> hs1_u, hs1_m, hs1_r;
  /// L^4_{(0,t_i)} Hdot^1 norm of U.
  std::vector<double> l4t_h1_running;
  /// Picard: L^4_T Hdot^1 size of successive updates and their ratios.
  std::vector<double> picard_updates;
  std::vector<double> contraction_ratios;
  int iterations = 0;
  bool converged = false;
  /// Picard: L^4_T Hdot^1 norm of U - Phi(U) at the returned iterate.
  double mild_residual = 0.0;
  /// Largest sector violation seen before re-projection.
  double max_sector_drift = 0.0;
  double wall_seconds = 0.0;

  void record(double t, const State& s);

 private:
  double last_h1_ = 0.0;
};

struct SolveResult {
  std::vector<State> trajectory;
  SolveReport report;
};

struct SolveOptions {
  bool nonlinear = true;
  /// Keep every node of the trajectory (otherwise only the final state).
  bool store_trajectory = true;
  /// Called on every node after it has been recorded.
  std::function<void(double, const State&)> observer;
};

/// Damped heat semigroups of the three components: (0, nu), (1/tau, sigma),
/// ((1+chi0)/tau, sigma).
std::array<PropagatorSpec, 3> state_propagators(const Params& p);

/// Full right-hand side of the reformulated system minus its linear part:
/// eval_direct plus the forcing (ab P(G.grad G), 0, f) at time t.
State full_nonlinearity(const State& s, const ExternalField& F, const Params& p, double t);

/// Picard iteration on the mild equation over the whole time grid:
/// U^{n+1} = S U0 + g + D[N(U^n)], where D is the per-component Duhamel
/// integral. Stops when the L^4_T Hdot^1 size of the update is below tol.
SolveResult picard_solve(const State& U0, const ExternalField& F, const Params& p,
                         const TimeGrid& grid, double tol, int max_iter,
                         const SolveOptions& options = {});

/// Exponential time differencing, second order (Cox-Matthews ETD2RK).
class EtdStepper {
 public:
  using Rhs = std::function<State(const State&, double)>;

  EtdStepper(const GridPtr& grid, std::array<PropagatorSpec, 3> specs, double dt, Rhs rhs);
  double dt() const { return dt_; }
  /// Advance from t to t + dt; throws BlowUpError on non-finite output.
  State step(const State& s, double t) const;

 private:
  double dt_;
  std::array<StepWeights, 3> weights_;
  Rhs rhs_;
};

State etd_step(const State& s, const ExternalField& F, const Params& p, double t, double dt,
               bool nonlinear = true);

/// March etd_step over the grid, re-projecting the sectors after every step.
SolveResult simulate(const State& U0, const ExternalField& F, const Params& p, const TimeGrid& grid,
                     const SolveOptions& options = {});

struct LimitResult {
  SolveReport forced_report;
  SolveReport unforced_report;
  /// Velocity at every node (or only the final node without store_trajectory).
  std::vector<VectorField> forced_u;
  std::vector<VectorField> unforced_u;
  /// max over nodes of the coefficient difference of the two velocity fields.
  double max_discrepancy = 0.0;
  /// max over nodes of the coefficient size of chi0/(1+chi0)^2 P(G.grad G).
  double max_projected_force = 0.0;
};

/// Limit Navier-Stokes system with the magnetic-pressure force, solved with
/// and without the (projected) force. States carry m = r = 0.
LimitResult limit_ns_solve(const VectorField& u0, const ExternalField& F, const Params& p,
                           const TimeGrid& grid, const SolveOptions& options = {});

}  // namespace ferro
