#include <cmath>

#include "doctest.h"
#include "ferro/norms.hpp"
#include "ferro/propagator.hpp"
#include "ferro/random_field.hpp"
#include "ferro/verifier.hpp"
#include "support.hpp"

using namespace ferro;
using testing::rel_err;

namespace {
bool check_ok(const ExperimentResult& r, const std::string& what) {
  for (const auto& c : r.checks)
    if (c.what == what) return c.ok;
  FAIL("no check named " << what);
  return false;
}

ExternalField demo_field(const GridPtr& g, bool constant = false) {
  if (constant) return ExternalField(g, {ForceMode{{1, 0, 0}, {0.5, 0.0}, Envelope::constant()}});
  return ExternalField(g, {ForceMode{{1, 0, 0}, {0.5, 0.0}, Envelope::sinusoidal(2.0, 0.3)},
                           ForceMode{{0, 1, 1}, {0.3, 0.2}, Envelope::exponential(1.0)}});
}

SweepSetup small_sweep(ExternalField F, State U0) {
  SweepSetup s(std::move(F));
  s.U0 = std::move(U0);
  s.base = Params{1.0, 1.0, 1.0, 1.0};
  s.tau_list = {1e-1, 1e-2, 1e-3};
  s.grid = {0.5, 50};
  s.eps = 0.05;
  s.h_target = 1.0;
  return s;
}
}  // namespace

TEST_CASE("digest and slope helpers") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 3 / std::sqrt(2.0), 1.5, 3 / std::sqrt(8.0)}) ==
        doctest::Approx(-0.5).epsilon(1e-14));
  CHECK_THROWS_AS(loglog_slope({1}, {1}), std::invalid_argument);

  ExperimentResult r;
  r.inputs = {{"a", 1}};
  r.check("first", true);
  r.finalize();
  CHECK(r.pass);
  r.check("second", false);
  r.finalize();
  CHECK_FALSE(r.pass);
  CHECK(r.inputs_digest == fnv1a_hex(r.inputs.dump()));
  CHECK(r.to_json()["checks"].size() == 2);
}

TEST_CASE("parabolic scaling exponents") {
  ParabolicConfig c;
  c.trials = 20;
  c.n_steps = 100;
  const ExperimentResult r = verify_parabolic_smoothing(c);
  CHECK(r.pass);
  const auto& sl = r.measured["slopes"];
  CHECK(std::abs(sl["mu_data"].get<double>() + 0.25) <= 0.02);
  CHECK(std::abs(sl["mu_forcing_L2"].get<double>() + 0.75) <= 0.02);
  CHECK(std::abs(sl["gamma_data"].get<double>() + 0.25) <= 0.02);
  CHECK(std::abs(sl["gamma_forcing"].get<double>() + 0.75) <= 0.02);
  // The L^{4/3} forcing class scales like mu^{-1/2} per mode.
  CHECK(std::abs(sl["mu_forcing_L43"].get<double>() + 0.5) <= 0.02);
  CHECK(r.to_json().dump() == verify_parabolic_smoothing(c).to_json().dump());

  c.trials = 0;
  CHECK_THROWS_WITH_AS(verify_parabolic_smoothing(c), doctest::Contains("trials"), std::invalid_argument);
}

TEST_CASE("constant single-mode forcing has the closed-form Duhamel response") {
  auto g = make_grid(8);
  VectorField f(g);
  testing::set_mode(*g, f.comp[0], 0, 1, 0, {0.25, -0.1});
  const PropagatorSpec spec{0.5, 1.0};
  const TimeGrid tg{1.0, 40};
  const auto times = tg.nodes();
  const std::vector<VectorField> forcing(times.size(), f);
  const auto w = duhamel_convolve(spec, times, forcing);
  const double lambda = spec.rate(1.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double factor = -std::expm1(-lambda * times[i]) / lambda;
    CHECK(max_abs_diff(w[i], factor * f) < 1e-15);
  }
  const double lhs = lpt_hs_norm(times, w, 4.0, 1.0);
  const double rhs = std::pow(spec.mu, -0.75) * lpt_hs_norm(times, forcing, 2.0, -0.5);
  CHECK(std::isfinite(lhs / rhs));
  CHECK(lhs / rhs > 0.0);

  const std::vector<VectorField> zeros(times.size(), VectorField(g));
  for (const auto& z : duhamel_convolve(spec, times, zeros)) CHECK(hs_norm(z, 1.0) == 0.0);
}

TEST_CASE("multiplier decay") {
  auto g = make_grid(16);
  VectorField one(g);
  testing::set_mode(*g, one.comp[2], 1, 0, 0, {0.5, 0.0});
  const auto r1 = verify_multiplier_decay(1.0, 1.0, one);
  CHECK(r1.pass);
  const auto norms = r1.measured["norm"].get<std::vector<double>>();
  for (std::size_t j = 0; j < norms.size(); ++j) {
    const double gamma = std::pow(10.0, static_cast<double>(j));
    CHECK(rel_err(norms[j], hs_norm(one, 0.0) * std::sqrt(1.0 / (gamma + 1.0))) < 1e-13);
  }

  const VectorField rnd = random_vector(g, 31);
  const auto a1 = verify_multiplier_decay(1.0, 1.0, rnd);
  const auto a2 = verify_multiplier_decay(1.0, 2.0, rnd);
  CHECK(a1.pass);
  CHECK(a2.pass);
  CHECK(a1.measured["final_relative"].get<double>() < 1e-3);
  const auto n1 = a1.measured["norm"].get<std::vector<double>>();
  const auto n2 = a2.measured["norm"].get<std::vector<double>>();
  for (std::size_t j = 0; j < n1.size(); ++j) CHECK(n2[j] < n1[j]);
  CHECK(a1.measured["c_low_max"].get<double>() <= 1.0);
}

TEST_CASE("damping estimate") {
  auto g = make_grid(8);
  DampingConfig c;
  c.w0 = VectorField(g);
  testing::set_mode(*g, c.w0.comp[1], 1, 0, 0, {0.5, 0.0});
  c.F1 = random_vector(g, 40);
  c.F2 = random_vector(g, 41);
  c.n_steps = 100;
  const auto r = verify_damping_estimate(c);
  CHECK(r.pass);
  CHECK(r.measured["worst_data_match"].get<double>() < 0.01);
  const auto& rows = r.measured["rows"];
  REQUIRE(rows.size() == c.gamma_list.size());
  CHECK(rows[0]["gamma"].get<double>() == 0.0);
  // The gamma = 0 row is the undamped control; with |k| = 1 every other row
  // is gamma-dominated and decays like e^{-(gamma + sigma) eps}.
  CHECK_FALSE(rows[0].contains("data_ratio"));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double gamma = rows[i]["gamma"].get<double>();
    if (gamma * c.eps >= 690.0) continue;
    CHECK(rel_err(rows[i]["data_ratio"].get<double>(), std::exp(-(gamma + c.sigma) * c.eps)) < 1e-12);
  }
  for (std::size_t i = 2; i < rows.size(); ++i)
    CHECK(rows[i]["forcing_sup"].get<double>() < rows[i - 1]["forcing_sup"].get<double>());
}

TEST_CASE("tau sweep: decoupled case reproduces the limit exactly") {
  auto g = make_grid(8);
  State U0(g);
  U0.u = testing::random_state(g, 2, 0.3).u;
  const SweepSetup s = small_sweep(ExternalField(g), U0);
  const auto rows = sweep_rows(s);
  for (const auto& row : rows) {
    CHECK(row.sup_u_dev < 1e-12);
    CHECK(row.sup_mr == 0.0);
    CHECK(row.sup_u_dev == rows.front().sup_u_dev);
  }
  CHECK(run_tau_sweep(s, rows).pass);
  CHECK(verify_limit_convergence(s, rows).pass);
}

TEST_CASE("tau sweep: pure relaxation of small magnetization") {
  auto g = make_grid(8);
  State U0(g);
  U0.m = random_band(g, 7, 2.0, 1e-3, Sector::solenoidal);
  SweepSetup s = small_sweep(ExternalField(g), U0);
  s.base.sigma = 0.01;
  s.tau_list = {0.1, 0.05};
  s.eps = 0.1;
  const auto rows = sweep_rows(s);
  for (const auto& row : rows) {
    const double want = std::exp(-s.eps / row.tau) * hs_norm(U0.m, 0.5);
    CHECK(rel_err(row.sup_mr, want) < 0.1);
  }
}

TEST_CASE("tau sweep: starting at the balance state stays near it") {
  auto g = make_grid(8);
  const ExternalField F = demo_field(g, true);
  SweepSetup s = small_sweep(F, State(g));
  const auto rows = sweep_rows(s);
  // Only the sigma grad F source moves r off balance, by O(tau).
  const double f = hs_norm(compute_f(F.at(0.0), F.dt_at(0.0), s.base), 0.5);
  for (const auto& row : rows) {
    CHECK(row.sup_mr < row.tau * f);
    CHECK(row.sup_u_dev < row.tau * f);
  }
  CHECK(run_tau_sweep(s, rows).pass);
}

TEST_CASE("tau sweep: monotone convergence with forcing") {
  auto g = make_grid(8);
  State U0(g);
  U0.u = testing::random_state(g, 4, 0.3).u;
  SweepSetup s = small_sweep(demo_field(g), U0);
  s.jobs = 2;
  const auto rows = sweep_rows(s);
  const auto a = run_tau_sweep(s, rows);
  const auto b = verify_limit_convergence(s, rows);
  CHECK(a.pass);
  CHECK(b.pass);
  CHECK(check_ok(b, "|G^tau| non-increasing"));
  CHECK(a.measured["mr_tau_rate"].get<double>() == doctest::Approx(1.0).epsilon(0.05));

  // Fan-out does not change a single bit.
  s.jobs = 1;
  CHECK(run_tau_sweep(s, sweep_rows(s)).to_json().dump() == a.to_json().dump());

  // The verdict is a function of the rows alone.
  auto flipped = rows;
  std::swap(flipped.front().sup_mr, flipped.back().sup_mr);
  CHECK_FALSE(run_tau_sweep(s, flipped).pass);

  s.tau_list = {1e-3, 1e-2};
  CHECK_THROWS_WITH_AS(sweep_rows(s), doctest::Contains("decreasing"), std::invalid_argument);
}

TEST_CASE("tau sweep: initial layer of rough magnetization data") {
  // With m0, r0 far from balance and tau << dt the step cannot resolve the
  // layer, and |u - u_bar| stalls at an O(dt) floor. The (m, r) part is exact.
  auto g = make_grid(8);
  SweepSetup s = small_sweep(demo_field(g), testing::random_state(g, 4, 0.3));
  const auto coarse = sweep_rows(s);
  CHECK(run_tau_sweep(s, coarse).pass);
  s.grid.n_steps *= 4;
  const auto fine = sweep_rows(s);
  CHECK(fine.back().sup_u_dev < 0.5 * coarse.back().sup_u_dev);
  CHECK(rel_err(fine.back().sup_mr, coarse.back().sup_mr) < 1e-3);
}

TEST_CASE("smallness groups") {
  auto g = make_grid(8);
  const Params p{1.0, 1.0, 1e-2, 1.0};
  const TimeGrid tg{1.0, 20};
  const auto zero = measure_smallness_diagnostics(State(g), ExternalField(g), p, tg);
  CHECK(zero.pass);
  CHECK(zero.checks.empty());
  for (const auto& [k, v] : zero.measured.items()) CHECK(v.get<double>() == 0.0);

  State U0 = testing::random_state(g, 9);
  const auto one = measure_smallness_diagnostics(U0, demo_field(g), p, tg);
  U0.u *= 2.0;
  const auto two = measure_smallness_diagnostics(U0, demo_field(g), p, tg);
  CHECK(two.measured["velocity_group"].get<double>() == 2.0 * one.measured["velocity_group"].get<double>());
  CHECK(two.measured["field_group"].get<double>() == one.measured["field_group"].get<double>());
}

TEST_CASE("product rule, limit identity, Picard, ETD order and energy") {
  const auto pr = verify_product_rule(100, 3, {8, 16});
  CHECK(pr.pass);

  auto g = make_grid(8);
  const Params p{1.0, 1.0, 1e-2, 1.0};
  const ExternalField F = demo_field(g);
  const State U0 = testing::random_state(g, 14, 0.3);
  CHECK(verify_limit_identity(U0.u, F, p, {0.5, 20}, 5).pass);

  const State small = (1e-2 / hs_norm(U0.u, 0.5)) * U0;
  const auto pc = verify_picard_contraction(small, F, p, {0.25, 25}, 1e-13, 60);
  CHECK(pc.pass);
  CHECK(pc.measured["max_ratio"].get<double>() < 0.75);

  const auto eo = verify_etd_order(U0, F, Params{1.0, 1.0, 1.0, 1.0}, 0.5, 20);
  CHECK(eo.pass);
  CHECK(std::abs(eo.measured["order"].get<double>() - 2.0) <= 0.1);

  const auto en = energy_bound(U0, F, p, {0.5, 50});
  CHECK(en.pass);
  CHECK(std::isfinite(en.measured["sup_lhs"].get<double>()));
  CHECK(en.measured["lhs"].size() == 51);
}
