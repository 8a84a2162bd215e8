#include "ferro/state_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ferro/norms.hpp"
#include "ferro/operators.hpp"
#include "ferro/products.hpp"
#include "ferro/propagator.hpp"

namespace ferro {

State& State::operator+=(const State& o) { return axpy(1.0, o); }
State& State::operator-=(const State& o) { return axpy(-1.0, o); }

State& State::operator*=(double a) {
  u *= a;
  m *= a;
  r *= a;
  return *this;
}

State& State::axpy(double a, const State& o) {
  u.axpy(a, o.u);
  m.axpy(a, o.m);
  r.axpy(a, o.r);
  return *this;
}

State operator+(State a, const State& b) { return a += b; }
State operator-(State a, const State& b) { return a -= b; }
State operator*(double s, State a) { return a *= s; }

double max_abs(const State& s) { return std::max({max_abs(s.u), max_abs(s.m), max_abs(s.r)}); }

double max_abs_diff(const State& a, const State& b) {
  return std::max({max_abs_diff(a.u, b.u), max_abs_diff(a.m, b.m), max_abs_diff(a.r, b.r)});
}

double hermitian_defect(const State& s) {
  return std::max({hermitian_defect(s.u), hermitian_defect(s.m), hermitian_defect(s.r)});
}

double hs_norm(const State& s, double s_exp) {
  const double a = hs_norm(s.u, s_exp), b = hs_norm(s.m, s_exp), c = hs_norm(s.r, s_exp);
  return std::sqrt(a * a + b * b + c * c);
}

double sector_drift(const State& s) {
  return std::max({divergence_residual(s.u), divergence_residual(s.m), curl_residual(s.r)});
}

State project_sectors(const State& s) {
  return State(leray_project(s.u), leray_project(s.m), gradient_part(s.r));
}

bool is_finite(const State& s) {
  for (int i = 0; i < 3; ++i)
    for (const auto& c : s[i].comp)
      for (const auto& z : c)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

VectorField compute_GF(const ScalarField& F) { return inv_laplacian_gradient(F); }

VectorField magnetostatic_H(const VectorField& M, const ScalarField& F) {
  VectorField H = compute_GF(F);
  H -= gradient_part(M);
  return H;
}

double magnetostatic_residual(const PhysicalState& ps, const ScalarField& F) {
  ScalarField div = divergence(ps.M + ps.H);
  div -= F;
  return std::max(curl_residual(ps.H), max_abs(div));
}

State to_reformulated(const PhysicalState& ps, const ScalarField& F, const Params& p) {
  const double scale = std::max({1.0, max_abs(ps.M), max_abs(ps.H), max_abs(F)});
  const double residual = magnetostatic_residual(ps, F);
  if (residual > kClosureTolerance * scale) {
    throw std::invalid_argument("to_reformulated: magnetostatic closure violated (residual " +
                                std::to_string(residual) + ")");
  }
  VectorField r = gradient_part(ps.M);
  r.axpy(-p.a(), compute_GF(F));
  return State(ps.u, leray_project(ps.M), std::move(r));
}

PhysicalState to_physical(const State& s, const ScalarField& F, const Params& p) {
  const VectorField G = compute_GF(F);
  PhysicalState ps{s.u, s.m + s.r, -1.0 * s.r};
  ps.M.axpy(p.a(), G);
  ps.H.axpy(p.b(), G);
  return ps;
}

VectorField compute_f(const ScalarField& F, const ScalarField& dF_dt, const Params& p) {
  require_mean_free(F, "compute_f");
  VectorField f = inv_laplacian_gradient(dF_dt);
  f.axpy(-p.sigma, gradient(F));
  f *= -p.a();
  return f;
}

VectorField magnetic_pressure_force(const VectorField& G, const Params& p) {
  VectorField out = leray_project(advection(G, G));
  out *= p.a() * p.b();
  return out;
}

std::vector<State> compute_g(const ExternalField& F, const Params& p, std::span<const double> times) {
  if (times.empty() || times.front() != 0.0) {
    throw std::invalid_argument("compute_g: time grid must start at 0");
  }
  const GridPtr& grid = F.grid();
  std::vector<State> g(times.size(), State(grid));
  if (F.is_zero()) return g;

  std::vector<VectorField> force_u, force_r;
  force_u.reserve(times.size());
  force_r.reserve(times.size());
  for (double t : times) {
    const ScalarField Ft = F.at(t);
    force_u.push_back(magnetic_pressure_force(compute_GF(Ft), p));
    force_r.push_back(compute_f(Ft, F.dt_at(t), p));
  }
  const auto g1 = duhamel_convolve(PropagatorSpec{0.0, p.nu}, times, force_u);
  const auto g2 = duhamel_convolve(PropagatorSpec{(1.0 + p.chi0) / p.tau, p.sigma}, times, force_r);
  for (std::size_t i = 0; i < times.size(); ++i) {
    g[i].u = g1[i];
    g[i].r = g2[i];
  }
  return g;
}

PhysicalState stationary_state(const ScalarField& F, const Params& p) {
  const VectorField G = compute_GF(F);
  return PhysicalState{VectorField(F.grid), p.a() * G, p.b() * G};
}

PhysicalRates physical_rates(const PhysicalState& ps, const Params& p) {
  const VectorField& u = ps.u;
  const VectorField& M = ps.M;
  const VectorField& H = ps.H;
  const VectorField MxH = cross(M, H, true);

  VectorField du = advection(M, H);
  du.axpy(0.5, curl(MxH));
  du.axpy(-1.0, advection(u, u));
  du = leray_project(du);
  du.axpy(p.nu, laplacian(u));

  VectorField dM = curl_cross(u, M);
  dM *= 0.5;
  dM -= advection(u, M);
  dM -= cross(M, MxH);
  dM.axpy(-1.0 / p.tau, M - p.chi0 * H);
  dM.axpy(p.sigma, laplacian(M));
  return PhysicalRates{std::move(du), std::move(dM)};
}

}  // namespace ferro
