#include "ferro/nonlinear.hpp"

#include "ferro/operators.hpp"
#include "ferro/products.hpp"

namespace ferro {

namespace {
// Magnetization-row output: P for m, Q for r.
State rows(VectorField u_row, const VectorField& mag_row) {
  return State(std::move(u_row), leray_project(mag_row), gradient_part(mag_row));
}

VectorField w_of(const State& s) { return s.m + s.r; }

VectorField v_of(const State& s, const Params& p) {
  VectorField v = s.m;
  v.axpy(1.0 + p.chi0, s.r);
  return v;
}

VectorField m_plus_1mchi_r(const State& s, const Params& p) {
  VectorField out = s.m;
  out.axpy(1.0 - p.chi0, s.r);
  return out;
}
}  // namespace

State eval_direct(const State& s, const VectorField& G, const Params& p, NonlinearBudget* budget) {
  require_same_grid(s.u.grid, G.grid, "eval_direct");
  const TransformCount before = transform_counter();

  VectorField M = s.m + s.r;
  M.axpy(p.a(), G);
  VectorField H = -1.0 * s.r;
  H.axpy(p.b(), G);
  const VectorField MxH = cross(M, H, true);

  VectorField nu = advection(M, H);
  nu.axpy(0.5, curl(MxH));
  nu.axpy(-p.a() * p.b(), advection(G, G));
  nu -= advection(s.u, s.u);

  VectorField nm = curl_cross(s.u, M);
  nm *= 0.5;
  nm -= advection(s.u, M);
  nm -= cross(M, MxH);

  State out = rows(leray_project(nu), nm);
  if (budget != nullptr) {
    const TransformCount& after = transform_counter();
    *budget = NonlinearBudget{after.forward - before.forward, after.inverse - before.inverse,
                              after.products - before.products};
  }
  return out;
}

State eval_B_NS(const State& s) {
  const VectorField w = w_of(s);
  VectorField nu = advection(s.u, s.u);
  nu += advection(w, s.r);
  nu.axpy(0.5, curl(cross(w, s.r)));
  nu *= -1.0;

  VectorField nm = curl_cross(s.u, w);
  nm *= 0.5;
  nm -= advection(s.u, w);
  return rows(leray_project(nu), nm);
}

State eval_L1(const State& s, const VectorField& G, const Params& p) {
  require_same_grid(s.u.grid, G.grid, "eval_L1");
  VectorField nu = advection(m_plus_1mchi_r(s, p), G);
  nu += scalar_times(divergence(G), v_of(s, p));
  nu *= 0.5 * p.b();

  VectorField nm = advection(s.u, G);
  nm *= -p.a();
  return rows(leray_project(nu), nm);
}

State eval_L2(const State& s, const VectorField& G, const Params& p) {
  require_same_grid(s.u.grid, G.grid, "eval_L2");
  VectorField nu = advection(G, m_plus_1mchi_r(s, p));
  nu -= scalar_times(divergence(v_of(s, p)), G);
  nu *= 0.5 * p.b();

  VectorField nm = curl_cross(s.u, G);
  nm *= 0.5 * p.a();
  return rows(leray_project(nu), nm);
}

State eval_N1(const State& s, const VectorField& G, const Params& p) {
  require_same_grid(s.u.grid, G.grid, "eval_N1");
  VectorField nm = triple(G, v_of(s, p), G);
  nm *= -p.a() * p.b();
  return rows(VectorField(s.u.grid), nm);
}

State eval_N2(const State& s, const VectorField& G, const Params& p) {
  require_same_grid(s.u.grid, G.grid, "eval_N2");
  VectorField nm = triple(G, s.r, s.m);
  nm *= p.a();
  nm.axpy(p.b(), triple(w_of(s), v_of(s, p), G));
  nm *= -1.0;
  return rows(VectorField(s.u.grid), nm);
}

State eval_N3(const State& s) {
  VectorField nm = triple(w_of(s), s.r, s.m);
  nm *= -1.0;
  return rows(VectorField(s.u.grid), nm);
}

double decomposition_residual(const State& s, const VectorField& G, const Params& p) {
  State sum = eval_B_NS(s);
  sum += eval_L1(s, G, p);
  sum += eval_L2(s, G, p);
  sum += eval_N1(s, G, p);
  sum += eval_N2(s, G, p);
  sum += eval_N3(s);
  return max_abs_diff(eval_direct(s, G, p), sum);
}

}  // namespace ferro
