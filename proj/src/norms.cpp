#include "ferro/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ferro {

namespace {
double weighted_sum(const Grid& g, const Coefficients& c, double s) {
  double sum = 0.0;
  for (std::size_t f = 0; f < c.size(); ++f) {
    const double k2 = g.k2(f);
    if (k2 == 0.0) continue;
    const double w = s == 0.0 ? 1.0 : std::pow(k2, s);
    sum += w * std::norm(c[f]);
  }
  return sum;
}
}  // namespace

double hs_norm(const ScalarField& v, double s) {
  return std::sqrt(weighted_sum(*v.grid, v.coef, s) * v.grid->volume());
}

double hs_norm(const VectorField& v, double s) {
  double sum = 0.0;
  for (const auto& c : v.comp) sum += weighted_sum(*v.grid, c, s);
  return std::sqrt(sum * v.grid->volume());
}

double l2_quadrature(const PhysicalScalar& v, const Grid& g) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  const double h = g.spacing();
  return std::sqrt(sum * h * h * h);
}

double l2_quadrature(const PhysicalVector& v, const Grid& g) {
  double sum = 0.0;
  for (const auto& c : v) {
    double q = l2_quadrature(c, g);
    sum += q * q;
  }
  return std::sqrt(sum);
}

double lp_time_norm(std::span<const double> times, std::span<const double> values, double p) {
  if (times.empty() || values.empty()) throw std::invalid_argument("lp_time_norm: empty series");
  if (times.size() != values.size()) {
    throw std::invalid_argument("lp_time_norm: times and values differ in length");
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_time_norm: p must be >= 1");
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double a = std::pow(std::abs(values[i - 1]), p);
    const double b = std::pow(std::abs(values[i]), p);
    integral += 0.5 * (times[i] - times[i - 1]) * (a + b);
  }
  return std::pow(integral, 1.0 / p);
}

namespace {
template <class Field>
double lpt_impl(std::span<const double> times, std::span<const Field> series, double p,
                double s) {
  if (series.empty()) throw std::invalid_argument("lpt_hs_norm: empty series");
  std::vector<double> norms(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) norms[i] = hs_norm(series[i], s);
  return lp_time_norm(times, norms, p);
}
}  // namespace

double lpt_hs_norm(std::span<const double> times, std::span<const VectorField> series, double p,
                   double s) {
  return lpt_impl(times, series, p, s);
}

double lpt_hs_norm(std::span<const double> times, std::span<const ScalarField> series, double p,
                   double s) {
  return lpt_impl(times, series, p, s);
}

}  // namespace ferro
