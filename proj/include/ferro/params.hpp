#pragma once

#include <algorithm>

namespace ferro {

/// Physical constants in the normalization rho0 = mu0 = beta = 1.
struct Params {
  double nu = 1.0;     // kinematic viscosity
  double sigma = 1.0;  // magnetization diffusivity
  double tau = 1.0;    // entropic relaxation time
  double chi0 = 1.0;   // magnetic susceptibility

  double c() const { return std::min(nu, sigma); }
  /// chi0 / (1 + chi0): weight of G_F in M.
  double a() const { return chi0 / (1.0 + chi0); }
  /// 1 / (1 + chi0): weight of G_F in H.
  double b() const { return 1.0 / (1.0 + chi0); }

  /// Throws std::invalid_argument naming the offending key ("params.tau", ...).
  void validate() const;
};

}  // namespace ferro
