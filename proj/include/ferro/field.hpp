#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "ferro/grid.hpp"

namespace ferro {

using Coefficients = std::vector<Complex>;
using PhysicalScalar = std::vector<double>;
using PhysicalVector = std::array<std::vector<double>, 3>;

/// Raised when an operator needs a mean-free input (Delta^-1, Hodge projectors).
class SolvabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fourier coefficients of a scalar field on a periodic grid.
struct ScalarField {
  GridPtr grid;
  Coefficients coef;

  ScalarField() = default;
  explicit ScalarField(GridPtr g) : grid(std::move(g)), coef(grid->size(), Complex{}) {}

  std::size_t size() const { return coef.size(); }
  Complex& operator[](std::size_t f) { return coef[f]; }
  const Complex& operator[](std::size_t f) const { return coef[f]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
};

/// Three coefficient arrays, one per Cartesian component.
struct VectorField {
  GridPtr grid;
  std::array<Coefficients, 3> comp;

  VectorField() = default;
  explicit VectorField(GridPtr g);

  Coefficients& operator[](int d) { return comp[d]; }
  const Coefficients& operator[](int d) const { return comp[d]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);
  /// this += a * o
  VectorField& axpy(double a, const VectorField& o);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where);

/// Largest coefficient modulus over all modes (and components).
double max_abs(const ScalarField& a);
double max_abs(const VectorField& a);
/// Largest coefficient modulus of a - b.
double max_abs_diff(const ScalarField& a, const ScalarField& b);
double max_abs_diff(const VectorField& a, const VectorField& b);

/// Largest |c(-k) - conj c(k)|: zero for fields that represent real data.
double hermitian_defect(const ScalarField& a);
double hermitian_defect(const VectorField& a);

/// Real part of the inverse transform.
PhysicalScalar to_physical(const ScalarField& a);
PhysicalVector to_physical(const VectorField& a);

/// Forward transform of real samples. With apply_mask the mean mode, the
/// Nyquist planes and (when the grid dealiases) the modes outside the 2/3
/// band are zeroed.
ScalarField from_physical(const GridPtr& g, const PhysicalScalar& v, bool apply_mask);
VectorField from_physical(const GridPtr& g, const PhysicalVector& v, bool apply_mask);

/// Zero everything the product mask drops.
void apply_mask(ScalarField& a);
void apply_mask(VectorField& a);

/// Physical sample positions: x_d = index_d * L / n.
std::array<double, 3> grid_point(const Grid& g, std::size_t flat);

/// Sample a function of position into spectral form (no mask).
template <class Fn>
ScalarField sample_scalar(const GridPtr& g, Fn&& fn) {
  PhysicalScalar v(g->size());
  for (std::size_t f = 0; f < g->size(); ++f) v[f] = fn(grid_point(*g, f));
  return from_physical(g, v, false);
}

template <class Fn>
VectorField sample_vector(const GridPtr& g, Fn&& fn) {
  PhysicalVector v;
  for (auto& c : v) c.resize(g->size());
  for (std::size_t f = 0; f < g->size(); ++f) {
    const std::array<double, 3> val = fn(grid_point(*g, f));
    for (int d = 0; d < 3; ++d) v[d][f] = val[d];
  }
  return from_physical(g, v, false);
}

}  // namespace ferro
