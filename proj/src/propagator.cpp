#include "ferro/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ferro {

namespace {
constexpr double kSeriesThreshold = 0.1;

// sum_{j>=0} z^j / (j + offset)!, enough terms for |z| < kSeriesThreshold.
double phi_series(double z, int offset) {
  double term = 1.0;
  for (int j = 2; j <= offset; ++j) term /= j;
  double sum = term;
  for (int j = 1; j < 14; ++j) {
    term *= z / (j + offset);
    sum += term;
  }
  return sum;
}
}  // namespace

double phi1(double z) {
  if (z == 0.0) return 1.0;
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < kSeriesThreshold) return phi_series(z, 2);
  return (std::expm1(z) - z) / (z * z);
}

StepWeights step_weights(const PropagatorSpec& spec, const Grid& g, double h) {
  StepWeights w;
  w.decay.resize(g.size());
  w.w1.resize(g.size());
  w.w2.resize(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double z = -spec.rate(g.k2(f)) * h;
    w.decay[f] = std::exp(z);
    w.w1[f] = h * phi1(z);
    w.w2[f] = h * phi2(z);
  }
  return w;
}

namespace {
void check_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagator_apply: negative time " + std::to_string(t));
}

void apply_decay(const PropagatorSpec& spec, double t, const Grid& g, Coefficients& c) {
  for (std::size_t f = 0; f < c.size(); ++f) c[f] *= std::exp(-t * spec.rate(g.k2(f)));
}

void apply_multiplier(double gamma, double mu, double alpha, const Grid& g, Coefficients& c) {
  for (std::size_t f = 0; f < c.size(); ++f) {
    const double k2 = g.k2(f);
    if (k2 == 0.0) {
      c[f] = Complex{};
      continue;
    }
    c[f] *= std::pow(k2 / (gamma + mu * k2), 0.5 * alpha);
  }
}
}  // namespace

ScalarField propagator_apply(const PropagatorSpec& spec, double t, const ScalarField& v) {
  check_time(t);
  ScalarField out = v;
  apply_decay(spec, t, *v.grid, out.coef);
  return out;
}

VectorField propagator_apply(const PropagatorSpec& spec, double t, const VectorField& v) {
  check_time(t);
  VectorField out = v;
  for (auto& c : out.comp) apply_decay(spec, t, *v.grid, c);
  return out;
}

VectorField damping_multiplier_apply(double gamma, double mu, double alpha, const VectorField& v) {
  VectorField out = v;
  for (auto& c : out.comp) apply_multiplier(gamma, mu, alpha, *v.grid, c);
  return out;
}

ScalarField damping_multiplier_apply(double gamma, double mu, double alpha, const ScalarField& v) {
  ScalarField out = v;
  apply_multiplier(gamma, mu, alpha, *v.grid, out.coef);
  return out;
}

namespace {
template <class Field>
std::vector<Field> duhamel_impl(const PropagatorSpec& spec, std::span<const double> times,
                                std::span<const Field> forcing) {
  if (times.empty()) throw std::invalid_argument("duhamel_convolve: empty time grid");
  if (times.size() != forcing.size()) {
    throw std::invalid_argument("duhamel_convolve: forcing must be sampled at every node");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("duhamel_convolve: time grid is not strictly increasing");
    }
  }
  const GridPtr& grid = forcing[0].grid;
  std::vector<Field> out;
  out.reserve(times.size());
  out.emplace_back(grid);

  StepWeights w;
  double last_h = -1.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    if (h != last_h) {
      w = step_weights(spec, *grid, h);
      last_h = h;
    }
    Field next = out.back();
    const Field& f0 = forcing[i - 1];
    const Field& f1 = forcing[i];
    require_same_grid(grid, f1.grid, "duhamel_convolve");
    auto step = [&](Coefficients& y, const Coefficients& a, const Coefficients& b) {
      for (std::size_t f = 0; f < y.size(); ++f) {
        y[f] = w.decay[f] * y[f] + (w.w1[f] - w.w2[f]) * a[f] + w.w2[f] * b[f];
      }
    };
    if constexpr (std::is_same_v<Field, VectorField>) {
      for (int d = 0; d < 3; ++d) step(next.comp[d], f0.comp[d], f1.comp[d]);
    } else {
      step(next.coef, f0.coef, f1.coef);
    }
    out.push_back(std::move(next));
  }
  return out;
}
}  // namespace

std::vector<VectorField> duhamel_convolve(const PropagatorSpec& spec, std::span<const double> times,
                                          std::span<const VectorField> forcing) {
  return duhamel_impl(spec, times, forcing);
}

std::vector<ScalarField> duhamel_convolve(const PropagatorSpec& spec, std::span<const double> times,
                                          std::span<const ScalarField> forcing) {
  return duhamel_impl(spec, times, forcing);
}

}  // namespace ferro
