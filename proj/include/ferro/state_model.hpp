#pragma once

#include <span>
#include <vector>

#include "ferro/external_field.hpp"
#include "ferro/field.hpp"
#include "ferro/params.hpp"

namespace ferro {

/// Reformulated unknown U = (u, m, r): velocity, solenoidal magnetization part,
/// and the shifted gradient part r = QM - chi0/(1+chi0) G_F.
struct State {
  VectorField u, m, r;

  State() = default;
  explicit State(const GridPtr& g) : u(g), m(g), r(g) {}
  State(VectorField u_, VectorField m_, VectorField r_)
      : u(std::move(u_)), m(std::move(m_)), r(std::move(r_)) {}

  const GridPtr& grid() const { return u.grid; }
  VectorField& operator[](int i) { return i == 0 ? u : (i == 1 ? m : r); }
  const VectorField& operator[](int i) const { return i == 0 ? u : (i == 1 ? m : r); }

  State& operator+=(const State& o);
  State& operator-=(const State& o);
  State& operator*=(double a);
  State& axpy(double a, const State& o);
};

State operator+(State a, const State& b);
State operator-(State a, const State& b);
State operator*(double s, State a);
double max_abs(const State& s);
double max_abs_diff(const State& a, const State& b);
double hermitian_defect(const State& s);
/// sqrt of the sum of squared component norms.
double hs_norm(const State& s, double s_exp);

/// Largest sector violation: div u, div m and curl r coefficient residuals.
double sector_drift(const State& s);
/// Re-project onto the sectors: P on u and m, Q on r.
State project_sectors(const State& s);
bool is_finite(const State& s);

/// (u, M, H) in the original variables.
struct PhysicalState {
  VectorField u, M, H;
};

VectorField compute_GF(const ScalarField& F);

/// H = -QM + G_F: the curl-free field with div(M + H) = F.
VectorField magnetostatic_H(const VectorField& M, const ScalarField& F);

/// Relative tolerance on the magnetostatic closure accepted by to_reformulated.
inline constexpr double kClosureTolerance = 1e-10;

/// Largest of the curl H and div(M + H) - F coefficient residuals.
double magnetostatic_residual(const PhysicalState& ps, const ScalarField& F);

/// Throws std::invalid_argument when the closure fails beyond kClosureTolerance.
State to_reformulated(const PhysicalState& ps, const ScalarField& F, const Params& p);
PhysicalState to_physical(const State& s, const ScalarField& F, const Params& p);

/// f = -chi0/(1+chi0) (grad Delta^-1 dF/dt - sigma grad F).
VectorField compute_f(const ScalarField& F, const ScalarField& dF_dt, const Params& p);

/// Ponderomotive force chi0/(1+chi0)^2 P(G_F . grad G_F) driving the u-equation.
VectorField magnetic_pressure_force(const VectorField& G, const Params& p);

/// Outer force g = (g1, 0, g2) on the nodes of times (times[0] = 0).
std::vector<State> compute_g(const ExternalField& F, const Params& p, std::span<const double> times);

/// Balance state u = 0, M = chi0/(1+chi0) G_F, H = 1/(1+chi0) G_F.
PhysicalState stationary_state(const ScalarField& F, const Params& p);

/// Time derivatives of u (Leray-projected) and M given by the original
/// system at a physical state, with dF/dt entering only through H.
struct PhysicalRates {
  VectorField du;
  VectorField dM;
};
PhysicalRates physical_rates(const PhysicalState& ps, const Params& p);

}  // namespace ferro
