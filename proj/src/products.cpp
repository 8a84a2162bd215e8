#include "ferro/products.hpp"

#include <stdexcept>

#include "ferro/operators.hpp"

namespace ferro {

namespace {
VectorField finish(const GridPtr& g, const PhysicalVector& p, bool keep_mean = false) {
  ++transform_counter().products;
  VectorField out = from_physical(g, p, false);
  for (int d = 0; d < 3; ++d) {
    const Complex mean = out.comp[d][0];
    for (std::size_t f = 0; f < g->size(); ++f)
      if (!g->kept(f)) out.comp[d][f] = Complex{};
    if (keep_mean) out.comp[d][0] = Complex(mean.real(), 0.0);
  }
  return out;
}

PhysicalVector empty_like(const Grid& g) {
  PhysicalVector p;
  for (auto& c : p) c.assign(g.size(), 0.0);
  return p;
}

PhysicalVector cross_physical(const PhysicalVector& a, const PhysicalVector& b) {
  PhysicalVector out;
  const std::size_t size = a[0].size();
  for (auto& c : out) c.resize(size);
  for (std::size_t f = 0; f < size; ++f) {
    out[0][f] = a[1][f] * b[2][f] - a[2][f] * b[1][f];
    out[1][f] = a[2][f] * b[0][f] - a[0][f] * b[2][f];
    out[2][f] = a[0][f] * b[1][f] - a[1][f] * b[0][f];
  }
  return out;
}
}  // namespace

VectorField advection(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid, "advection");
  const Grid& g = *a.grid;
  const PhysicalVector pa = to_physical(a);
  PhysicalVector out = empty_like(g);
  ScalarField comp(b.grid);
  for (int d = 0; d < 3; ++d) {
    comp.coef = b.comp[d];
    const PhysicalVector grad = to_physical(gradient(comp));
    for (std::size_t f = 0; f < g.size(); ++f) {
      out[d][f] = pa[0][f] * grad[0][f] + pa[1][f] * grad[1][f] + pa[2][f] * grad[2][f];
    }
  }
  return finish(a.grid, out);
}

VectorField cross(const VectorField& a, const VectorField& b, bool keep_mean) {
  require_same_grid(a.grid, b.grid, "cross");
  return finish(a.grid, cross_physical(to_physical(a), to_physical(b)), keep_mean);
}

VectorField curl_cross(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid, "curl_cross");
  return finish(a.grid, cross_physical(to_physical(curl(a)), to_physical(b)));
}

VectorField triple(const VectorField& a, const VectorField& b, const VectorField& c) {
  require_same_grid(a.grid, b.grid, "triple");
  require_same_grid(a.grid, c.grid, "triple");
  return cross(a, cross(b, c, true));
}

VectorField scalar_times(const ScalarField& s, const VectorField& v) {
  require_same_grid(s.grid, v.grid, "scalar_times");
  const PhysicalScalar ps = to_physical(s);
  PhysicalVector pv = to_physical(v);
  for (auto& c : pv)
    for (std::size_t f = 0; f < c.size(); ++f) c[f] *= ps[f];
  return finish(v.grid, pv);
}

VectorField physical_product(ProductKind kind, const VectorField& a, const VectorField& b) {
  switch (kind) {
    case ProductKind::advection: return advection(a, b);
    case ProductKind::cross: return cross(a, b);
    case ProductKind::curl_cross: return curl_cross(a, b);
    case ProductKind::triple: break;
  }
  throw std::invalid_argument("physical_product: triple product needs three operands");
}

VectorField physical_product(ProductKind kind, const VectorField& a, const VectorField& b,
                             const VectorField& c) {
  if (kind != ProductKind::triple) {
    throw std::invalid_argument("physical_product: only the triple product takes three operands");
  }
  return triple(a, b, c);
}

}  // namespace ferro
