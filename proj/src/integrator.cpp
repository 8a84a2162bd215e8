#include "ferro/integrator.hpp"

#include <chrono>
#include <cmath>

#include "ferro/nonlinear.hpp"
#include "ferro/norms.hpp"
#include "ferro/operators.hpp"
#include "ferro/products.hpp"

namespace ferro {

namespace {
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double l4_h1(std::span<const double> times, const std::vector<State>& series) {
  std::vector<double> values(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) values[i] = hs_norm(series[i], 1.0);
  return lp_time_norm(times, values, 4.0);
}

State propagate(const std::array<PropagatorSpec, 3>& specs, double t, const State& s) {
  return State(propagator_apply(specs[0], t, s.u), propagator_apply(specs[1], t, s.m),
               propagator_apply(specs[2], t, s.r));
}

std::vector<State> duhamel_state(const std::array<PropagatorSpec, 3>& specs,
                                 std::span<const double> times, const std::vector<State>& forcing) {
  std::vector<State> out(forcing.size());
  std::vector<VectorField> comp(forcing.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < forcing.size(); ++i) comp[i] = forcing[i][c];
    auto d = duhamel_convolve(specs[c], times, comp);
    for (std::size_t i = 0; i < forcing.size(); ++i) out[i][c] = std::move(d[i]);
  }
  return out;
}
}  // namespace

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> t(static_cast<std::size_t>(n_steps) + 1);
  for (int i = 0; i <= n_steps; ++i) t[i] = t_end * i / n_steps;
  return t;
}

void TimeGrid::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("time.t_end must be a positive finite number");
  }
  if (n_steps < 1) throw std::invalid_argument("time.n_steps must be a positive integer");
}

void SolveReport::record(double t, const State& s) {
  times.push_back(t);
  hs12_u.push_back(hs_norm(s.u, 0.5));
  hs12_m.push_back(hs_norm(s.m, 0.5));
  hs12_r.push_back(hs_norm(s.r, 0.5));
  hs1_u.push_back(hs_norm(s.u, 1.0));
  hs1_m.push_back(hs_norm(s.m, 1.0));
  hs1_r.push_back(hs_norm(s.r, 1.0));
  const std::size_t i = times.size() - 1;
  const double h1 = std::sqrt(hs1_u[i] * hs1_u[i] + hs1_m[i] * hs1_m[i] + hs1_r[i] * hs1_r[i]);
  if (i == 0) {
    l4t_h1_running.push_back(0.0);
    last_h1_ = h1;
    return;
  }
  const double prev = l4t_h1_running.back();
  const double integral = std::pow(prev, 4.0) +
                          0.5 * (times[i] - times[i - 1]) * (std::pow(last_h1_, 4.0) + std::pow(h1, 4.0));
  l4t_h1_running.push_back(std::pow(integral, 0.25));
  last_h1_ = h1;
}

std::array<PropagatorSpec, 3> state_propagators(const Params& p) {
  return {PropagatorSpec{0.0, p.nu}, PropagatorSpec{1.0 / p.tau, p.sigma},
          PropagatorSpec{(1.0 + p.chi0) / p.tau, p.sigma}};
}

State full_nonlinearity(const State& s, const ExternalField& F, const Params& p, double t) {
  if (F.is_zero()) return eval_direct(s, VectorField(s.grid()), p);
  const ScalarField Ft = F.at(t);
  const VectorField G = compute_GF(Ft);
  State out = eval_direct(s, G, p);
  out.u += magnetic_pressure_force(G, p);
  out.r += compute_f(Ft, F.dt_at(t), p);
  return out;
}

SolveResult picard_solve(const State& U0, const ExternalField& F, const Params& p,
                         const TimeGrid& grid, double tol, int max_iter, const SolveOptions& options) {
  p.validate();
  grid.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  const auto start = Clock::now();
  const auto specs = state_propagators(p);
  const std::vector<double> times = grid.nodes();
  const std::size_t n = times.size();

  std::vector<VectorField> G(n);
  const bool forced = !F.is_zero();
  for (std::size_t i = 0; i < n; ++i) {
    G[i] = forced ? compute_GF(F.at(times[i])) : VectorField(U0.grid());
  }

  std::vector<State> base = compute_g(F, p, times);
  for (std::size_t i = 0; i < n; ++i) base[i] += propagate(specs, times[i], U0);

  auto map = [&](const std::vector<State>& U) {
    if (!options.nonlinear) return base;
    std::vector<State> N(n);
    for (std::size_t i = 0; i < n; ++i) N[i] = eval_direct(U[i], G[i], p);
    std::vector<State> out = duhamel_state(specs, times, N);
    for (std::size_t i = 0; i < n; ++i) out[i] += base[i];
    return out;
  };
  auto distance = [&](const std::vector<State>& a, const std::vector<State>& b) {
    std::vector<State> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    return l4_h1(times, d);
  };

  SolveResult result;
  SolveReport& rep = result.report;
  std::vector<State> U = base;
  int above_one = 0;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<State> next = map(U);
    const double d = distance(next, U);
    rep.iterations = it;
    rep.picard_updates.push_back(d);
    U = std::move(next);
    if (!std::isfinite(d)) throw DivergenceError(d, it);
    if (d < tol) {
      rep.converged = true;
      break;
    }
    if (rep.picard_updates.size() >= 2) {
      const double prev = rep.picard_updates[rep.picard_updates.size() - 2];
      const double ratio = d / prev;
      rep.contraction_ratios.push_back(ratio);
      above_one = ratio >= 1.0 ? above_one + 1 : 0;
      if (above_one >= 3) throw DivergenceError(ratio, it);
    }
  }
  rep.mild_residual = distance(map(U), U);

  for (std::size_t i = 0; i < n; ++i) {
    rep.max_sector_drift = std::max(rep.max_sector_drift, sector_drift(U[i]));
    rep.record(times[i], U[i]);
    if (options.observer) options.observer(times[i], U[i]);
  }
  if (options.store_trajectory) {
    result.trajectory = std::move(U);
  } else {
    result.trajectory.push_back(std::move(U.back()));
  }
  rep.wall_seconds = seconds_since(start);
  return result;
}

EtdStepper::EtdStepper(const GridPtr& grid, std::array<PropagatorSpec, 3> specs, double dt, Rhs rhs)
    : dt_(dt), rhs_(std::move(rhs)) {
  if (!(dt > 0.0)) throw std::invalid_argument("etd_step: dt must be positive");
  for (int c = 0; c < 3; ++c) weights_[c] = step_weights(specs[c], *grid, dt);
}

State EtdStepper::step(const State& s, double t) const {
  const std::size_t size = s.grid()->size();
  auto combine = [&](const State& x, const State& y, bool predictor) {
    // predictor: decay * x + w1 * y;  corrector: x + w2 * y
    State out = x;
    for (int c = 0; c < 3; ++c) {
      const StepWeights& w = weights_[c];
      for (int d = 0; d < 3; ++d) {
        Coefficients& o = out[c].comp[d];
        const Coefficients& yv = y[c].comp[d];
        for (std::size_t f = 0; f < size; ++f) {
          o[f] = predictor ? w.decay[f] * o[f] + w.w1[f] * yv[f] : o[f] + w.w2[f] * yv[f];
        }
      }
    }
    return out;
  };

  State next;
  if (rhs_) {
    const State n0 = rhs_(s, t);
    const State a = combine(s, n0, true);
    next = combine(a, rhs_(a, t + dt_) - n0, false);
  } else {
    next = combine(s, State(s.grid()), true);
  }
  if (!is_finite(next)) throw BlowUpError(t + dt_);
  return next;
}

State etd_step(const State& s, const ExternalField& F, const Params& p, double t, double dt,
               bool nonlinear) {
  EtdStepper::Rhs rhs;
  if (nonlinear) {
    rhs = [&](const State& x, double tt) { return full_nonlinearity(x, F, p, tt); };
  } else if (!F.is_zero()) {
    rhs = [&](const State& x, double tt) {
      State out(x.grid());
      const ScalarField Ft = F.at(tt);
      out.u = magnetic_pressure_force(compute_GF(Ft), p);
      out.r = compute_f(Ft, F.dt_at(tt), p);
      return out;
    };
  }
  return EtdStepper(s.grid(), state_propagators(p), dt, rhs).step(s, t);
}

namespace {
SolveResult march(const State& U0, const TimeGrid& grid, const EtdStepper& stepper,
                  const SolveOptions& options) {
  const auto start = Clock::now();
  SolveResult result;
  SolveReport& rep = result.report;
  State U = U0;
  const std::vector<double> times = grid.nodes();
  rep.record(times[0], U);
  if (options.observer) options.observer(times[0], U);
  if (options.store_trajectory) result.trajectory.push_back(U);
  for (int i = 0; i < grid.n_steps; ++i) {
    State next = stepper.step(U, times[i]);
    rep.max_sector_drift = std::max(rep.max_sector_drift, sector_drift(next));
    U = project_sectors(next);
    rep.record(times[i + 1], U);
    if (options.observer) options.observer(times[i + 1], U);
    if (options.store_trajectory) result.trajectory.push_back(U);
  }
  if (!options.store_trajectory) result.trajectory.push_back(std::move(U));
  rep.iterations = grid.n_steps;
  rep.converged = true;
  rep.wall_seconds = seconds_since(start);
  return result;
}
}  // namespace

SolveResult simulate(const State& U0, const ExternalField& F, const Params& p, const TimeGrid& grid,
                     const SolveOptions& options) {
  p.validate();
  grid.validate();
  EtdStepper::Rhs rhs;
  if (options.nonlinear) {
    rhs = [&](const State& x, double t) { return full_nonlinearity(x, F, p, t); };
  } else if (!F.is_zero()) {
    rhs = [&](const State& x, double t) {
      State out(x.grid());
      const ScalarField Ft = F.at(t);
      out.u = magnetic_pressure_force(compute_GF(Ft), p);
      out.r = compute_f(Ft, F.dt_at(t), p);
      return out;
    };
  }
  const EtdStepper stepper(U0.grid(), state_propagators(p), grid.dt(), rhs);
  return march(U0, grid, stepper, options);
}

LimitResult limit_ns_solve(const VectorField& u0, const ExternalField& F, const Params& p,
                           const TimeGrid& grid, const SolveOptions& options) {
  p.validate();
  grid.validate();
  if (divergence_residual(u0) > 1e-12 * std::max(1.0, max_abs(u0))) {
    throw std::invalid_argument("limit_ns_solve: u0 must be divergence-free");
  }
  const GridPtr& g = u0.grid;
  const auto specs = state_propagators(p);
  LimitResult out;

  auto ns = [&](bool forced) {
    return [&, forced](const State& x, double t) {
      State rhs(g);
      if (options.nonlinear) rhs.u = -1.0 * leray_project(advection(x.u, x.u));
      if (forced && !F.is_zero()) {
        const VectorField force = magnetic_pressure_force(compute_GF(F.at(t)), p);
        out.max_projected_force = std::max(out.max_projected_force, max_abs(force));
        rhs.u += force;
      }
      return rhs;
    };
  };
  const State U0(u0, VectorField(g), VectorField(g));
  auto run = [&](bool forced, std::vector<VectorField>& velocity) {
    SolveOptions local;
    local.nonlinear = options.nonlinear;
    local.store_trajectory = false;
    local.observer = [&](double t, const State& s) {
      velocity.push_back(s.u);
      if (options.observer) options.observer(t, s);
    };
    return march(U0, grid, EtdStepper(g, specs, grid.dt(), ns(forced)), local).report;
  };
  out.forced_report = run(true, out.forced_u);
  out.unforced_report = run(false, out.unforced_u);
  for (std::size_t i = 0; i < out.forced_u.size(); ++i) {
    out.max_discrepancy = std::max(out.max_discrepancy, max_abs_diff(out.forced_u[i], out.unforced_u[i]));
  }
  if (!options.store_trajectory) {
    out.forced_u.erase(out.forced_u.begin(), out.forced_u.end() - 1);
    out.unforced_u.erase(out.unforced_u.begin(), out.unforced_u.end() - 1);
  }
  return out;
}

}  // namespace ferro
