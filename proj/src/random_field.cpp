#include "ferro/random_field.hpp"

#include <cmath>
#include <random>

#include "ferro/norms.hpp"
#include "ferro/operators.hpp"

namespace ferro {

namespace {
void fill(const Grid& g, std::mt19937_64& rng, double s_decay, Coefficients& c) {
  std::normal_distribution<double> normal(0.0, 1.0);
  c.assign(g.size(), Complex{});
  for (std::size_t f = 0; f < g.size(); ++f) {
    if (!g.in_band(f)) continue;
    const std::size_t partner = g.conjugate_index(f);
    if (partner < f) continue;
    const double scale = std::pow(g.k2(f), -0.5 * s_decay) / std::sqrt(2.0);
    const double re = normal(rng), im = normal(rng);
    c[f] = scale * Complex(re, im);
    c[partner] = std::conj(c[f]);
  }
}
}  // namespace

ScalarField random_scalar(const GridPtr& g, std::uint64_t seed, double s_decay) {
  std::mt19937_64 rng(seed);
  ScalarField out(g);
  fill(*g, rng, s_decay, out.coef);
  return out;
}

VectorField random_vector(const GridPtr& g, std::uint64_t seed, double s_decay, Sector sector) {
  std::mt19937_64 rng(seed);
  VectorField out(g);
  for (auto& c : out.comp) fill(*g, rng, s_decay, c);
  switch (sector) {
    case Sector::solenoidal: return leray_project(out);
    case Sector::gradient: return gradient_part(out);
    case Sector::any: break;
  }
  return out;
}

VectorField random_band(const GridPtr& g, std::uint64_t seed, double s_decay, double amplitude,
                        Sector sector) {
  VectorField v = random_vector(g, seed, s_decay, sector);
  const double norm = hs_norm(v, 0.5);
  if (norm > 0.0) v *= amplitude / norm;
  return v;
}

}  // namespace ferro
