#pragma once

#include "ferro/params.hpp"
#include "ferro/state_model.hpp"

namespace ferro {

/// Transform and product counts of one evaluation.
struct NonlinearBudget {
  long forward = 0;
  long inverse = 0;
  long products = 0;

  bool operator==(const NonlinearBudget&) const = default;
};

/// Evaluation plan of eval_direct: seven masked products (four advections,
/// three cross products), each synthesizing its operands from scratch.
inline constexpr NonlinearBudget kDirectBudget{21, 66, 7};

/// Right-hand sides (N_u, N_m, N_r) of the reformulated system, with
/// M = m + r + aG and H = -r + bG (a = chi0/(1+chi0), b = 1/(1+chi0)):
///
///   N_u = -P(u.grad u) + P(M.grad H) + 1/2 P curl(M x H) - ab P(G.grad G)
///   N_m = -P(u.grad M) + 1/2 P(curl u x M) - P(M x (M x H))
///   N_r = the same with Q in place of P.
///
/// Terms involving G alone (the magnetic pressure and f) belong to the outer
/// force g and are not included. Optionally reports the transform budget.
State eval_direct(const State& s, const VectorField& G, const Params& p,
                  NonlinearBudget* budget = nullptr);

/// Quadratic part in U, free of G:
///   u: -P(u.grad u) - P(w.grad r) - 1/2 P curl(w x r),   w = m + r
///   m: -P(u.grad w) + 1/2 P(curl u x w);  r: same with Q.
State eval_B_NS(const State& s);

/// Linear in U and in G, derivative on G (v = m + (1+chi0) r):
///   u: b/2 P[(m + (1-chi0) r).grad G + v div G]
///   m: -a P(u.grad G);  r: -a Q(u.grad G).
State eval_L1(const State& s, const VectorField& G, const Params& p);

/// Linear in U and in G, derivative on U:
///   u: b/2 P[G.grad(m + (1-chi0) r) - G div v]
///   m: a/2 P(curl u x G);  r: a/2 Q(curl u x G).
State eval_L2(const State& s, const VectorField& G, const Params& p);

/// Magnetization cubic -M x (M x H) split by degree in U (u-rows vanish):
///   N1: -ab {P,Q}[G x (v x G)]
///   N2: -{P,Q}[a G x (r x m) + b w x (v x G)]
///   N3: -{P,Q}[w x (r x m)]
State eval_N1(const State& s, const VectorField& G, const Params& p);
State eval_N2(const State& s, const VectorField& G, const Params& p);
State eval_N3(const State& s);

/// Largest coefficient modulus of eval_direct - (B_NS + L1 + L2 + N1 + N2 + N3).
double decomposition_residual(const State& s, const VectorField& G, const Params& p);

}  // namespace ferro
