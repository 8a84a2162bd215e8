#include "ferro/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>

#include "ferro/checkpoint.hpp"
#include "ferro/config.hpp"
#include "ferro/norms.hpp"
#include "ferro/random_field.hpp"
#include "ferro/report.hpp"
#include "ferro/verifier.hpp"

namespace ferro {

namespace {

RunConfig load(const CliOptions& o) {
  if (o.config_path.empty()) throw ConfigError("config", "no config file given (--config or FERRO_CONFIG)");
  RunConfig c = load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.jobs < 1) throw ConfigError("jobs", "must be a positive integer");
  std::filesystem::create_directories(c.output_dir);
  return c;
}

std::string out_path(const RunConfig& c, const std::string& name) { return c.output_dir + "/" + name; }

// Runs a command body, translating failures into exit codes.
int guarded(const char* name, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "ferro " << name << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BlowUpError& e) {
    std::cerr << "ferro " << name << ": numerical blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const DivergenceError& e) {
    std::cerr << "ferro " << name << ": " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ferro " << name << ": invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "ferro " << name << ": " << e.what() << "\n";
    return kExitConfig;
  }
}

double default_h_target(const RunConfig& c, const ExternalField& F) {
  const double b = c.params.b();
  double sup = 0.0;
  for (double t : c.time.nodes()) sup = std::max(sup, b * hs_norm(compute_GF(F.at(t)), 0.5));
  return 1e-2 * sup;
}

template <class Fn>
void run_jobs(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex m;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

using Experiment = std::function<ExperimentResult()>;

std::vector<std::pair<std::string, Experiment>> suite(const RunConfig& c) {
  const GridPtr g = make_grid(c);
  const State U0 = initial_state(c, g);
  const ExternalField F = external_field(c, g);
  const auto& e = c.experiment;
  const std::uint64_t seed = c.seed;
  std::vector<std::pair<std::string, Experiment>> all;

  all.emplace_back("parabolic_smoothing", [=] {
    ParabolicConfig pc;
    pc.gamma = e.gamma;
    pc.mu = e.mu;
    pc.trials = e.trials;
    pc.seed = seed;
    return verify_parabolic_smoothing(pc);
  });
  all.emplace_back("multiplier_decay",
                   [=] { return verify_multiplier_decay(e.mu, 1.0, random_vector(g, 1000 * seed + 101)); });
  all.emplace_back("damping_estimate", [=] {
    DampingConfig dc;
    // Single |k| = 1 mode: the regime where gamma dominates diffusion.
    dc.w0 = VectorField(g);
    const std::size_t f = g->flat_of_mode(1, 0, 0);
    dc.w0.comp[1][f] = 0.5;
    dc.w0.comp[1][g->conjugate_index(f)] = 0.5;
    dc.F1 = random_vector(g, 1000 * seed + 103);
    dc.F2 = random_vector(g, 1000 * seed + 104);
    dc.t_end = c.time.t_end;
    dc.eps = c.eps();
    dc.n_steps = std::max(c.time.n_steps, 2);
    return verify_damping_estimate(dc);
  });
  all.emplace_back("product_rule",
                   [=] { return verify_product_rule(std::max(100, e.trials), 1000 * seed + 105, {8, 16, 24}); });
  all.emplace_back("limit_identity",
                   [=] { return verify_limit_identity(U0.u, F, c.params, c.time, 1000 * seed + 106); });
  all.emplace_back("picard_contraction", [=] {
    // Small-data regime: the configured data rescaled to the requested size.
    const double size = hs_norm(U0.u, 0.5) > 0.0 ? hs_norm(U0.u, 0.5) : hs_norm(U0, 0.5);
    const State small = size > 0.0 ? (e.picard_u0_norm / size) * U0 : U0;
    const double tol = 1e-10 * e.picard_u0_norm;
    return verify_picard_contraction(small, F, c.params, {e.picard_t_end, e.picard_steps}, tol, 60);
  });
  all.emplace_back("etd_order",
                   [=] { return verify_etd_order(U0, F, c.params, e.etd_t_end, e.etd_steps); });
  all.emplace_back("smallness_diagnostics",
                   [=] { return measure_smallness_diagnostics(U0, F, c.params, c.time); });
  all.emplace_back("energy_bound", [=] { return energy_bound(U0, F, c.params, c.time); });

  if (e.select.empty()) return all;
  std::vector<std::pair<std::string, Experiment>> chosen;
  for (auto& item : all)
    if (std::find(e.select.begin(), e.select.end(), item.first) != e.select.end()) chosen.push_back(item);
  return chosen;
}

}  // namespace

int cmd_simulate(const CliOptions& o) {
  return guarded("simulate", [&] {
    const RunConfig c = load(o);
    const GridPtr g = make_grid(c);
    const State U0 = initial_state(c, g);
    const ExternalField F = external_field(c, g);
    SolveOptions opts;
    opts.store_trajectory = false;
    int step = 0;
    if (c.checkpoint_every > 0) {
      opts.observer = [&](double t, const State& s) {
        if (step % c.checkpoint_every == 0 || step == c.time.n_steps) {
          char name[64];
          std::snprintf(name, sizeof name, "checkpoint_%06d.bin", step);
          write_checkpoint(out_path(c, name), s, c.params, t);
        }
        ++step;
      };
    }
    const SolveResult r = simulate(U0, F, c.params, c.time, opts);
    write_text(out_path(c, "norms.csv"), norms_csv(r.report));
    const State& last = r.trajectory.back();
    Json summary = {{"config", config_json(c)},
                    {"final",
                     {{"t", r.report.times.back()},
                      {"hs12_u", hs_norm(last.u, 0.5)},
                      {"hs12_m", hs_norm(last.m, 0.5)},
                      {"hs12_r", hs_norm(last.r, 0.5)},
                      {"hs1_u", hs_norm(last.u, 1.0)},
                      {"hs1_m", hs_norm(last.m, 1.0)},
                      {"hs1_r", hs_norm(last.r, 1.0)}}},
                    {"l4t_h1", r.report.l4t_h1_running.back()},
                    {"max_sector_drift", r.report.max_sector_drift},
                    {"steps", c.time.n_steps}};
    write_json(out_path(c, "summary.json"), summary);
    if (!o.quiet) {
      std::cout << "simulate: " << c.time.n_steps << " steps to t = " << c.time.t_end
                << ", |u|_H1/2 = " << hs_norm(last.u, 0.5) << ", output in " << c.output_dir << "\n";
    }
    return kExitOk;
  });
}

int cmd_sweep_tau(const CliOptions& o) {
  return guarded("sweep-tau", [&] {
    const RunConfig c = load(o);
    const GridPtr g = make_grid(c);
    SweepSetup s(external_field(c, g));
    s.U0 = initial_state(c, g);
    s.base = c.params;
    s.tau_list = c.experiment.tau_list;
    s.grid = c.time;
    s.eps = c.eps();
    s.h_target = c.experiment.h_target > 0.0 ? c.experiment.h_target : default_h_target(c, s.F);
    s.min_reduction = c.experiment.min_reduction;
    s.jobs = o.jobs;
    const std::vector<SweepRow> rows = sweep_rows(s);
    const ExperimentResult a = run_tau_sweep(s, rows);
    const ExperimentResult b = verify_limit_convergence(s, rows);
    const bool pass = a.pass && b.pass;
    write_json(out_path(c, "sweep_tau.json"),
               {{"config", config_json(c)}, {"experiments", {a.to_json(), b.to_json()}}, {"pass", pass}});
    if (!o.quiet) {
      for (const auto& r : rows) {
        std::printf("tau %-8.1e  sup|(m,r)| %.3e  sup|H-bG| %.3e  sup|u-ubar| %.3e  |G^tau| %.3e\n", r.tau,
                    r.sup_mr, r.sup_H_dev, r.sup_u_dev, r.g_tau);
      }
      std::printf("%s: %s\n%s: %s\n", a.name.c_str(), a.pass ? "pass" : "FAIL", b.name.c_str(),
                  b.pass ? "pass" : "FAIL");
    }
    return pass ? kExitOk : kExitAssertion;
  });
}

int cmd_verify(const CliOptions& o) {
  return guarded("verify", [&] {
    const RunConfig c = load(o);
    const auto experiments = suite(c);
    std::vector<ExperimentResult> results(experiments.size());
    run_jobs(experiments.size(), o.jobs, [&](std::size_t i) { results[i] = experiments[i].second(); });
    Json all = Json::array();
    bool pass = true;
    for (const auto& r : results) {
      write_json(out_path(c, r.name + ".json"), r.to_json());
      all.push_back(r.to_json());
      pass = pass && r.pass;
      if (!o.quiet) std::cout << r.name << ": " << (r.pass ? "pass" : "FAIL") << "\n";
    }
    write_json(out_path(c, "verify.json"), {{"config", config_json(c)}, {"experiments", all}, {"pass", pass}});
    return pass ? kExitOk : kExitAssertion;
  });
}

}  // namespace ferro
