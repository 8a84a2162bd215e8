#include "ferro/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ferro {

namespace {
constexpr Complex kI{0.0, 1.0};

void check_mean(const Complex& mean, double scale, const char* where) {
  const double m = std::abs(mean);
  if (m > 0.0 && m > kMeanTolerance * scale) {
    throw SolvabilityError(std::string(where) + ": input has a nonzero mean mode (|c0| = " +
                           std::to_string(m) + ")");
  }
}
}  // namespace

void require_mean_free(const ScalarField& a, const char* where) {
  check_mean(a.coef[0], max_abs(a), where);
}

void require_mean_free(const VectorField& v, const char* where) {
  const double scale = max_abs(v);
  for (int d = 0; d < 3; ++d) check_mean(v.comp[d][0], scale, where);
}

VectorField gradient(const ScalarField& a) {
  const Grid& g = *a.grid;
  VectorField out(a.grid);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto& k = g.k(f);
    for (int d = 0; d < 3; ++d) out.comp[d][f] = kI * k[d] * a.coef[f];
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = *v.grid;
  ScalarField out(v.grid);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto& k = g.k(f);
    out.coef[f] = kI * (k[0] * v.comp[0][f] + k[1] * v.comp[1][f] + k[2] * v.comp[2][f]);
  }
  return out;
}

VectorField curl(const VectorField& v) {
  const Grid& g = *v.grid;
  VectorField out(v.grid);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto& k = g.k(f);
    const Complex a = v.comp[0][f], b = v.comp[1][f], c = v.comp[2][f];
    out.comp[0][f] = kI * (k[1] * c - k[2] * b);
    out.comp[1][f] = kI * (k[2] * a - k[0] * c);
    out.comp[2][f] = kI * (k[0] * b - k[1] * a);
  }
  return out;
}

ScalarField laplacian(const ScalarField& a) {
  const Grid& g = *a.grid;
  ScalarField out(a.grid);
  for (std::size_t f = 0; f < g.size(); ++f) out.coef[f] = -g.k2(f) * a.coef[f];
  return out;
}

VectorField laplacian(const VectorField& v) {
  const Grid& g = *v.grid;
  VectorField out(v.grid);
  for (int d = 0; d < 3; ++d)
    for (std::size_t f = 0; f < g.size(); ++f) out.comp[d][f] = -g.k2(f) * v.comp[d][f];
  return out;
}

VectorField gradient_part(const VectorField& v) {
  require_mean_free(v, "gradient_part");
  const Grid& g = *v.grid;
  VectorField out(v.grid);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double k2 = g.k2(f);
    if (k2 == 0.0) continue;
    const auto& k = g.k(f);
    const Complex kv = k[0] * v.comp[0][f] + k[1] * v.comp[1][f] + k[2] * v.comp[2][f];
    for (int d = 0; d < 3; ++d) out.comp[d][f] = k[d] * kv / k2;
  }
  return out;
}

VectorField leray_project(const VectorField& v) {
  require_mean_free(v, "leray_project");
  const Grid& g = *v.grid;
  VectorField out(v.grid);
  for (std::size_t f = 0; f < g.size(); ++f) {
    if (f == 0) continue;
    const double k2 = g.k2(f);
    const auto& k = g.k(f);
    if (k2 == 0.0) {
      // Nyquist-only modes have no derivative; P acts as the identity there.
      for (int d = 0; d < 3; ++d) out.comp[d][f] = v.comp[d][f];
      continue;
    }
    const Complex kv = k[0] * v.comp[0][f] + k[1] * v.comp[1][f] + k[2] * v.comp[2][f];
    for (int d = 0; d < 3; ++d) out.comp[d][f] = v.comp[d][f] - k[d] * kv / k2;
  }
  return out;
}

VectorField inv_laplacian_gradient(const ScalarField& F) {
  require_mean_free(F, "inv_laplacian_gradient");
  const Grid& g = *F.grid;
  VectorField out(F.grid);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double k2 = g.k2(f);
    if (k2 == 0.0) continue;
    const auto& k = g.k(f);
    const Complex scale = -kI * F.coef[f] / k2;
    for (int d = 0; d < 3; ++d) out.comp[d][f] = k[d] * scale;
  }
  return out;
}

double divergence_residual(const VectorField& v) {
  const Grid& g = *v.grid;
  double m = 0.0;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double k2 = g.k2(f);
    if (k2 == 0.0) continue;
    const auto& k = g.k(f);
    const Complex kv = k[0] * v.comp[0][f] + k[1] * v.comp[1][f] + k[2] * v.comp[2][f];
    m = std::max(m, std::abs(kv) / std::sqrt(k2));
  }
  return m;
}

double curl_residual(const VectorField& v) {
  const Grid& g = *v.grid;
  double m = 0.0;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double k2 = g.k2(f);
    if (k2 == 0.0) continue;
    const auto& k = g.k(f);
    const Complex a = v.comp[0][f], b = v.comp[1][f], c = v.comp[2][f];
    const Complex x = k[1] * c - k[2] * b, y = k[2] * a - k[0] * c, z = k[0] * b - k[1] * a;
    m = std::max(m, std::sqrt(std::norm(x) + std::norm(y) + std::norm(z)) / std::sqrt(k2));
  }
  return m;
}

}  // namespace ferro
