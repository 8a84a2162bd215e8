#include "ferro/field.hpp"

#include <algorithm>
#include <cmath>

namespace ferro {

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where) {
  if (!a || !b) throw GridMismatchError(std::string(where) + ": field without grid");
  if (a != b && !(*a == *b)) {
    throw GridMismatchError(std::string(where) + ": operands live on different grids");
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid, o.grid, "ScalarField::operator+=");
  for (std::size_t f = 0; f < coef.size(); ++f) coef[f] += o.coef[f];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid, o.grid, "ScalarField::operator-=");
  for (std::size_t f = 0; f < coef.size(); ++f) coef[f] -= o.coef[f];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (auto& c : coef) c *= a;
  return *this;
}

VectorField::VectorField(GridPtr g) : grid(std::move(g)) {
  for (auto& c : comp) c.assign(grid->size(), Complex{});
}

VectorField& VectorField::operator+=(const VectorField& o) { return axpy(1.0, o); }

VectorField& VectorField::operator-=(const VectorField& o) { return axpy(-1.0, o); }

VectorField& VectorField::operator*=(double a) {
  for (auto& c : comp)
    for (auto& z : c) z *= a;
  return *this;
}

VectorField& VectorField::axpy(double a, const VectorField& o) {
  require_same_grid(grid, o.grid, "VectorField::axpy");
  for (int d = 0; d < 3; ++d) {
    auto& c = comp[d];
    const auto& oc = o.comp[d];
    for (std::size_t f = 0; f < c.size(); ++f) c[f] += a * oc[f];
  }
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

double max_abs(const ScalarField& a) {
  double m = 0.0;
  for (const auto& c : a.coef) m = std::max(m, std::abs(c));
  return m;
}

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (const auto& comp : a.comp)
    for (const auto& c : comp) m = std::max(m, std::abs(c));
  return m;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "max_abs_diff");
  double m = 0.0;
  for (std::size_t f = 0; f < a.coef.size(); ++f) m = std::max(m, std::abs(a.coef[f] - b.coef[f]));
  return m;
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid, "max_abs_diff");
  double m = 0.0;
  for (int d = 0; d < 3; ++d)
    for (std::size_t f = 0; f < a.comp[d].size(); ++f)
      m = std::max(m, std::abs(a.comp[d][f] - b.comp[d][f]));
  return m;
}

namespace {
double hermitian_defect(const Grid& g, const Coefficients& c) {
  double m = 0.0;
  for (std::size_t f = 0; f < c.size(); ++f) {
    m = std::max(m, std::abs(c[g.conjugate_index(f)] - std::conj(c[f])));
  }
  return m;
}
}  // namespace

double hermitian_defect(const ScalarField& a) { return hermitian_defect(*a.grid, a.coef); }

double hermitian_defect(const VectorField& a) {
  double m = 0.0;
  for (const auto& c : a.comp) m = std::max(m, hermitian_defect(*a.grid, c));
  return m;
}

namespace {
std::vector<double> inverse_real(const Grid& g, Coefficients c) {
  g.transform().inverse(c.data());
  std::vector<double> out(c.size());
  for (std::size_t f = 0; f < c.size(); ++f) out[f] = c[f].real();
  return out;
}

Coefficients forward_real(const Grid& g, const std::vector<double>& v, bool mask) {
  Coefficients c(v.size());
  for (std::size_t f = 0; f < v.size(); ++f) c[f] = Complex(v[f], 0.0);
  g.transform().forward(c.data());
  if (mask) {
    for (std::size_t f = 0; f < c.size(); ++f)
      if (!g.kept(f)) c[f] = Complex{};
  }
  return c;
}
}  // namespace

PhysicalScalar to_physical(const ScalarField& a) { return inverse_real(*a.grid, a.coef); }

PhysicalVector to_physical(const VectorField& a) {
  PhysicalVector out;
  for (int d = 0; d < 3; ++d) out[d] = inverse_real(*a.grid, a.comp[d]);
  return out;
}

ScalarField from_physical(const GridPtr& g, const PhysicalScalar& v, bool mask) {
  ScalarField out;
  out.grid = g;
  out.coef = forward_real(*g, v, mask);
  return out;
}

VectorField from_physical(const GridPtr& g, const PhysicalVector& v, bool mask) {
  VectorField out;
  out.grid = g;
  for (int d = 0; d < 3; ++d) out.comp[d] = forward_real(*g, v[d], mask);
  return out;
}

void apply_mask(ScalarField& a) {
  for (std::size_t f = 0; f < a.coef.size(); ++f)
    if (!a.grid->kept(f)) a.coef[f] = Complex{};
}

void apply_mask(VectorField& a) {
  for (auto& c : a.comp)
    for (std::size_t f = 0; f < c.size(); ++f)
      if (!a.grid->kept(f)) c[f] = Complex{};
}

std::array<double, 3> grid_point(const Grid& g, std::size_t f) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  const double h = g.spacing();
  return {h * static_cast<double>(f / (n * n)), h * static_cast<double>((f / n) % n),
          h * static_cast<double>(f % n)};
}

}  // namespace ferro
