// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ferro/external_field.hpp"
#include "ferro/integrator.hpp"
#include "ferro/nonlinear.hpp"
#include "ferro/norms.hpp"
#include "ferro/operators.hpp"
#include "ferro/random_field.hpp"
#include "ferro/state_model.hpp"
#include "ferro/verifier.hpp"

using namespace ferro;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

State random_state(const GridPtr& g, std::uint64_t seed, double scale) {
  State s(random_vector(g, 3 * seed, 2.0, Sector::solenoidal),
          random_vector(g, 3 * seed + 1, 2.0, Sector::solenoidal),
          random_vector(g, 3 * seed + 2, 2.0, Sector::gradient));
  s *= scale;
  return s;
}

ExternalField two_mode_field(const GridPtr& g) {
  return ExternalField(g, {ForceMode{{1, 0, 0}, {0.5, 0.0}, Envelope::sinusoidal(2.0, 0.3)},
                           ForceMode{{0, 1, 1}, {0.3, 0.2}, Envelope::exponential(1.0)}});
}

// Shared setup of criteria 6 and 8: velocity data, no initial (m, r).
const Params kSweepParams{1.0, 1.0, 1e-2, 1.0};
State sweep_data(const GridPtr& g) {
  return State(random_band(g, 601, 2.0, 0.5, Sector::solenoidal), VectorField(g), VectorField(g));
}

Outcome operator_algebra() {
  const auto g = make_grid(16);
  double proj = 0.0, closure = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const VectorField v = random_vector(g, seed);
    const VectorField Pv = leray_project(v);
    const VectorField Qv = gradient_part(v);
    proj = std::max({proj, max_abs_diff(leray_project(Pv), Pv), max_abs_diff(gradient_part(Qv), Qv),
                     max_abs_diff(Pv + Qv, v), max_abs(leray_project(Qv)), max_abs(gradient_part(Pv))});
    const ScalarField F = random_scalar(g, 1000 + seed);
    const VectorField H = magnetostatic_H(v, F);
    closure = std::max({closure, magnetostatic_residual({VectorField(g), v, H}, F),
                        max_abs(divergence(v + H) - F), curl_residual(H)});
  }
  return {proj < 1e-12 && closure < 1e-12,
          fmt("max projector defect %.2e, max closure residual %.2e, tol 1e-12", proj, closure)};
}

Outcome change_of_variables() {
  const auto g = make_grid(16);
  double trip = 0.0, balance = 0.0;
  for (double chi0 : {0.25, 1.0, 4.0}) {
    const Params p{1.0, 1.0, 1e-2, chi0};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const ScalarField F = random_scalar(g, 2000 + seed);
      const State s = random_state(g, seed, 1.0);
      const PhysicalState ps = to_physical(s, F, p);
      const State back = to_reformulated(ps, F, p);
      const PhysicalState again = to_physical(back, F, p);
      trip = std::max({trip, max_abs_diff(back, s), max_abs_diff(again.M, ps.M), max_abs_diff(again.H, ps.H)});
      const State rest = to_reformulated(stationary_state(F, p), F, p);
      balance = std::max({balance, max_abs(rest.u), max_abs(rest.m), max_abs(rest.r)});
    }
  }
  return {trip < 1e-13 && balance < 1e-13,
          fmt("round trip %.2e, balance state (m, r) %.2e, tol 1e-13", trip, balance)};
}

Outcome dual_path() {
  const Params p{1.0, 0.7, 0.1, 1.5};
  double worst16 = 0.0, worst32 = 0.0;
  for (int n : {16, 32}) {
    const auto g = make_grid(n);
    const VectorField G = compute_GF(random_scalar(g, 3000 + n));
    double& worst = n == 16 ? worst16 : worst32;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
      worst = std::max(worst, decomposition_residual(random_state(g, seed, 0.3), G, p));
  }
  return {worst16 < 1e-11 && worst32 < 1e-11,
          fmt("max residual %.2e at 16^3, %.2e at 32^3, tol 1e-11", worst16, worst32)};
}

Outcome linear_scaling() {
  ParabolicConfig c;
  c.slope_tolerance = 0.02;
  const ExperimentResult r = verify_parabolic_smoothing(c);
  const Json& s = r.measured["slopes"];
  const double mu_d = s["mu_data"], mu_f = s["mu_forcing_L2"], g_d = s["gamma_data"], g_f = s["gamma_forcing"];
  const bool ok = std::abs(mu_d + 0.25) <= 0.02 && std::abs(mu_f + 0.75) <= 0.02 &&
                  std::abs(g_d + 0.25) <= 0.02 && std::abs(g_f + 0.75) <= 0.02;
  return {ok && r.pass, fmt("slopes mu %.4f / %.4f, gamma %.4f / %.4f, tol 0.02", mu_d, mu_f, g_d, g_f)};
}

Outcome damping() {
  const auto g = make_grid(16);
  DampingConfig c;
  c.w0 = VectorField(g);
  const std::size_t f = g->flat_of_mode(1, 0, 0);
  c.w0.comp[1][f] = 0.5;
  c.w0.comp[1][g->conjugate_index(f)] = 0.5;
  c.F1 = random_vector(g, 702);
  c.F2 = random_vector(g, 703);
  c.match_tolerance = 0.01;
  const ExperimentResult r = verify_damping_estimate(c);
  const double worst = r.measured["worst_data_match"];
  return {r.pass && worst <= 0.01,
          fmt("worst data mismatch %.2e (tol 1e-2), forcing sup at gamma = 1e8 / gamma = 0: %.2e", worst,
              r.measured.value("forcing_residual_at_largest_gamma", 0.0))};
}

Outcome tau_sweep() {
  const auto g = make_grid(16);
  SweepSetup s(two_mode_field(g));
  s.U0 = sweep_data(g);
  s.base = kSweepParams;
  s.tau_list = {1e-1, 1e-2, 1e-3, 1e-4};
  s.grid = {1.0, 200};
  s.eps = 0.1;
  double sup = 0.0;
  for (double t : s.grid.nodes()) sup = std::max(sup, s.base.b() * hs_norm(compute_GF(s.F.at(t)), 0.5));
  s.h_target = 1e-2 * sup;
  s.min_reduction = 10.0;
  s.jobs = 4;
  const std::vector<SweepRow> rows = sweep_rows(s);
  const ExperimentResult a = run_tau_sweep(s, rows);
  const ExperimentResult b = verify_limit_convergence(s, rows);
  for (const SweepRow& row : rows) {
    std::printf("    tau %.0e: (m,r) %.3e  M %.3e  H %.3e  u %.3e  G^tau %.3e\n", row.tau, row.sup_mr,
                row.sup_M_dev, row.sup_H_dev, row.sup_u_dev, row.g_tau);
  }
  const double red = rows.front().sup_mr / rows.back().sup_mr;
  return {a.pass && b.pass, fmt("all five norms non-increasing, (m, r) reduction %.0fx (need 10x)", red)};
}

Outcome limit_identity() {
  const auto g = make_grid(16);
  const ExperimentResult r = verify_limit_identity(sweep_data(g).u, two_mode_field(g), kSweepParams, {0.5, 50},
                                                   801, 1e-12);
  const double proj = r.measured["max_projected_self_advection"];
  const double disc = r.measured["forced_unforced_discrepancy"];
  return {r.pass && proj < 1e-12 && disc < 1e-12,
          fmt("max |P(G.grad G)| %.2e, forced vs unforced %.2e, tol 1e-12", proj, disc)};
}

Outcome picard() {
  const auto g = make_grid(16);
  State U0 = sweep_data(g);
  U0 *= 1e-2 / hs_norm(U0.u, 0.5);
  const ExperimentResult r =
      verify_picard_contraction(U0, two_mode_field(g), kSweepParams, {0.25, 50}, 1e-12, 60, 1e-4);
  const double q = r.measured["max_ratio"];
  const double diff = r.measured["picard_vs_etd_Linf_H12"];
  return {r.pass && q < 0.75 && diff < 1e-4,
          fmt("max contraction ratio %.3f (< 0.75), Picard vs ETD %.2e (< 1e-4)", q, diff)};
}

Outcome etd_order() {
  const auto g = make_grid(16);
  const Params p{1.0, 1.0, 1.0, 1.0};
  const State U0 = random_state(g, 901, 0.5);
  const ExperimentResult r = verify_etd_order(U0, two_mode_field(g), p, 0.5, 20, 0.1);
  const double order = r.measured["order"];
  return {r.pass, fmt("observed order %.4f from 20/40/80 steps, tol 0.1", order)};
}

struct Criterion {
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"operator algebra on 100 random fields", 30.0, operator_algebra},
      {"change of variables and balance state", 0.0, change_of_variables},
      {"dual-path nonlinearity at 16^3 and 32^3", 0.0, dual_path},
      {"linear estimate scaling slopes", 120.0, linear_scaling},
      {"damping estimate", 0.0, damping},
      {"tau sweep", 600.0, tau_sweep},
      {"limit system identity", 0.0, limit_identity},
      {"Picard contraction", 0.0, picard},
      {"ETD2RK order", 0.0, etd_order},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1f s", secs);
    if (c.time_limit > 0.0) {
      timing += fmt(" (limit %.0f s)", c.time_limit);
      o.pass = o.pass && secs < c.time_limit;
    }
    std::printf("%s criterion %zu %s: %s; %s\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
