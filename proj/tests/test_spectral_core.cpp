#include <cmath>
#include <random>

#include "doctest.h"
#include "ferro/norms.hpp"
#include "ferro/operators.hpp"
#include "ferro/products.hpp"
#include "ferro/propagator.hpp"
#include "ferro/random_field.hpp"
#include "support.hpp"

using namespace ferro;
using testing::kPi;
using testing::rel_err;

namespace {
using P3 = std::array<double, 3>;
}

TEST_CASE("grid rejects odd or tiny n and round trips transforms") {
  CHECK_THROWS_AS(Grid(7), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2), std::invalid_argument);
  auto g = make_grid(16);
  const auto v = random_vector(g, 3);
  const auto back = from_physical(g, to_physical(v), false);
  CHECK(max_abs_diff(v, back) < 1e-12 * max_abs(v));
  CHECK(hermitian_defect(v) == 0.0);
}

TEST_CASE("dealias band is strict two-thirds") {
  Grid g(18);
  CHECK(g.in_band(g.flat_of_mode(5, 0, 0)));
  CHECK_FALSE(g.in_band(g.flat_of_mode(6, 0, 0)));
  Grid h(16);
  CHECK(h.in_band(h.flat_of_mode(5, -5, 5)));
  CHECK_FALSE(h.in_band(h.flat_of_mode(6, 0, 0)));
}

TEST_CASE("leray projection") {
  auto g = make_grid(16);
  SUBCASE("annihilates a gradient") {
    auto v = sample_vector(g, [](P3 x) { return P3{std::cos(x[0]), 0.0, 0.0}; });
    CHECK(max_abs(leray_project(v)) < 1e-15);
  }
  SUBCASE("fixes a solenoidal field") {
    auto v = sample_vector(g, [](P3 x) { return P3{std::sin(x[1]), std::sin(x[2]), std::sin(x[0])}; });
    CHECK(max_abs_diff(leray_project(v), v) < 1e-15);
  }
  SUBCASE("Hodge identity, idempotence, orthogonality") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto v = random_vector(g, seed);
      const auto Pv = leray_project(v);
      const auto Qv = gradient_part(v);
      CHECK(max_abs_diff(Pv + Qv, v) < 1e-13);
      CHECK(max_abs_diff(leray_project(Pv), Pv) < 1e-13);
      CHECK(max_abs_diff(gradient_part(Qv), Qv) < 1e-13);
      CHECK(max_abs(leray_project(Qv)) < 1e-13);
      CHECK(max_abs(gradient_part(Pv)) < 1e-13);
      CHECK(divergence_residual(Pv) < 1e-13);
      CHECK(curl_residual(Qv) < 1e-13);
    }
  }
  SUBCASE("rejects a mean mode") {
    VectorField v(g);
    v.comp[0][0] = 1.0;
    CHECK_THROWS_AS(leray_project(v), SolvabilityError);
    CHECK_THROWS_AS(gradient_part(v), SolvabilityError);
  }
}

TEST_CASE("gradient part examples") {
  auto g = make_grid(16);
  auto grad = sample_vector(g, [](P3 x) { return P3{std::cos(x[0]), 0.0, 0.0}; });
  CHECK(max_abs_diff(gradient_part(grad), grad) < 1e-15);
  auto sol = sample_vector(g, [](P3 x) { return P3{std::sin(x[1]), std::sin(x[2]), std::sin(x[0])}; });
  CHECK(max_abs(gradient_part(sol)) < 1e-15);
}

TEST_CASE("inverse Laplacian gradient") {
  auto g = make_grid(16);
  SUBCASE("cos x1") {
    auto F = sample_scalar(g, [](P3 x) { return std::cos(x[0]); });
    auto G = inv_laplacian_gradient(F);
    // grad Delta^-1 cos x1 = grad(-cos x1) = (sin x1, 0, 0)
    auto expected = sample_vector(g, [](P3 x) { return P3{std::sin(x[0]), 0.0, 0.0}; });
    CHECK(max_abs_diff(G, expected) < 1e-15);
    CHECK(max_abs_diff(divergence(G), F) < 1e-15);
  }
  SUBCASE("zero and random") {
    CHECK(max_abs(inv_laplacian_gradient(ScalarField(g))) == 0.0);
    auto F = random_scalar(g, 11);
    auto G = inv_laplacian_gradient(F);
    CHECK(curl_residual(G) < 1e-13);
    CHECK(max_abs_diff(divergence(G), F) < 1e-13);
  }
  SUBCASE("mean rejected") {
    ScalarField F(g);
    F.coef[0] = 0.5;
    CHECK_THROWS_AS(inv_laplacian_gradient(F), SolvabilityError);
  }
}

TEST_CASE("homogeneous Sobolev norms") {
  auto g = make_grid(16);
  auto v = sample_scalar(g, [](P3 x) { return std::cos(x[0]); });
  const double expected = std::pow(2.0 * kPi, 1.5) / std::sqrt(2.0);
  for (double s : {-1.5, 0.0, 0.5, 1.0, 2.0}) CHECK(rel_err(hs_norm(v, s), expected) < 1e-13);
  CHECK(rel_err(l2_quadrature(to_physical(v), *g), expected) < 1e-13);
  CHECK(hs_norm(ScalarField(g), 0.5) == 0.0);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto w = random_vector(g, seed);
    CHECK(rel_err(hs_norm(w, 0.0), l2_quadrature(to_physical(w), *g)) < 1e-10);
    const auto z = random_vector(g, seed + 100);
    CHECK(hs_norm(w + z, 1.0) <= hs_norm(w, 1.0) + hs_norm(z, 1.0));
    CHECK(rel_err(hs_norm(-3.0 * w, 0.5), 3.0 * hs_norm(w, 0.5)) < 1e-14);
  }
}

TEST_CASE("time norms") {
  auto g = make_grid(8);
  auto v = sample_vector(g, [](P3 x) { return P3{0.0, std::sin(x[0]), 0.0}; });
  v *= 1.0 / hs_norm(v, 1.0);
  const int n = 4000;
  std::vector<double> t(n + 1);
  std::vector<VectorField> constant, decaying, zero;
  for (int i = 0; i <= n; ++i) {
    t[i] = static_cast<double>(i) / n;
    constant.push_back(v);
    decaying.push_back(std::exp(-t[i]) * v);
    zero.emplace_back(g);
  }
  CHECK(rel_err(lpt_hs_norm(t, constant, 4.0, 1.0), 1.0) < 1e-13);
  CHECK(rel_err(lpt_hs_norm(t, decaying, 2.0, 1.0), std::sqrt((1.0 - std::exp(-2.0)) / 2.0)) < 1e-7);
  CHECK(rel_err(lpt_hs_norm(t, decaying, kInfinity, 1.0), 1.0) < 1e-14);
  CHECK(lpt_hs_norm(t, zero, 4.0, 1.0) == 0.0);
  CHECK_THROWS(lpt_hs_norm(std::span<const double>{}, std::span<const VectorField>{}, 2.0, 1.0));
}

TEST_CASE("semigroup propagator") {
  auto g = make_grid(8);
  ScalarField v(g);
  testing::set_mode(*g, v.coef, 1, 0, 0, {0.3, -0.2});
  const PropagatorSpec spec{2.0, 3.0};
  const auto w = propagator_apply(spec, 0.5, v);
  const std::size_t f = g->flat_of_mode(1, 0, 0);
  CHECK(std::abs(w.coef[f] - std::exp(-2.5) * v.coef[f]) < 1e-16);
  CHECK(max_abs_diff(propagator_apply(spec, 0.0, v), v) == 0.0);
  CHECK_THROWS_AS(propagator_apply(spec, -1e-3, v), std::invalid_argument);

  const auto r = random_vector(g, 4);
  const auto once = propagator_apply(spec, 0.7, r);
  const auto twice = propagator_apply(spec, 0.3, propagator_apply(spec, 0.4, r));
  CHECK(max_abs_diff(once, twice) < 1e-13);
}

TEST_CASE("heat propagator against a classical RK4 march") {
  auto g = make_grid(8);
  const ScalarField v0 = random_scalar(g, 21, 1.0);
  const PropagatorSpec spec{0.0, 0.7};
  const double t_end = 0.5;
  const int steps = 4000;
  const double h = t_end / steps;
  ScalarField v = v0;
  auto rhs = [&](const ScalarField& x) { return spec.mu * laplacian(x); };
  for (int i = 0; i < steps; ++i) {
    const auto k1 = rhs(v);
    const auto k2 = rhs(v + (0.5 * h) * k1);
    const auto k3 = rhs(v + (0.5 * h) * k2);
    const auto k4 = rhs(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const auto exact = propagator_apply(spec, t_end, v0);
  CHECK(hs_norm(v - exact, 0.0) / hs_norm(exact, 0.0) < 1e-6);
}

TEST_CASE("damping multiplier") {
  auto g = make_grid(8);
  ScalarField v(g);
  testing::set_mode(*g, v.coef, 2, 0, 0, {1.0, 0.0});
  const std::size_t f = g->flat_of_mode(2, 0, 0);
  CHECK(std::abs(damping_multiplier_apply(1.0, 1.0, 2.0, v).coef[f] - 0.8) < 1e-15);
  double last = 1.0;
  for (double gamma : {1.0, 10.0, 100.0, 1e4, 1e8}) {
    const double factor = damping_multiplier_apply(gamma, 1.0, 1.0, v).coef[f].real();
    CHECK(factor < last);
    last = factor;
  }
  CHECK(last < 1e-3);
  const double mu = 0.25;
  const double factor = damping_multiplier_apply(1e-10, mu, 1.5, v).coef[f].real();
  CHECK(rel_err(factor, std::pow(mu, -0.75)) < 1e-9);
}

TEST_CASE("phi functions are smooth across the series switch") {
  for (double z : {-1e-12, -1e-6, -0.0999999, -0.1, -0.1000001, -1.0, -50.0}) {
    const double ref1 = z == 0.0 ? 1.0 : std::expm1(z) / z;
    CHECK(rel_err(phi1(z), ref1) < 1e-15);
  }
  // phi2 by a long Taylor sum as oracle near zero
  for (double z : {-1e-8, -1e-4, -0.05, -0.0999, -0.1001}) {
    double term = 0.5, sum = 0.5;
    for (int j = 1; j < 30; ++j) {
      term *= z / (j + 2);
      sum += term;
    }
    CHECK(rel_err(phi2(z), sum) < 5e-15);
  }
  CHECK(rel_err(phi2(-1e4), (std::expm1(-1e4) + 1e4) / 1e8) < 1e-15);
}

TEST_CASE("Duhamel convolution") {
  auto g = make_grid(8);
  ScalarField mode(g);
  testing::set_mode(*g, mode.coef, 1, 1, 0, {1.0, 0.5});
  const std::size_t f = g->flat_of_mode(1, 1, 0);
  const double k2 = 2.0;

  std::vector<double> t;
  for (int i = 0; i <= 10; ++i) t.push_back(0.1 * i);

  SUBCASE("constant forcing across the stiffness range") {
    std::vector<ScalarField> forcing(t.size(), mode);
    for (double lambda : {1e-3, 1e-1, 1.0, 1e2, 1e4, 1e6, 1e8}) {
      const PropagatorSpec spec{lambda - k2 * 1e-4, 1e-4};
      const auto w = duhamel_convolve(spec, t, forcing);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double expected = -std::expm1(-lambda * t[i]) / lambda;
        CHECK(std::abs(w[i].coef[f] - expected * mode.coef[f]) <= 1e-14 * std::abs(expected * mode.coef[f]) + 1e-300);
      }
    }
  }
  SUBCASE("linear forcing against the antiderivative") {
    const double alpha = 0.7, beta = -1.3;
    std::vector<ScalarField> forcing;
    for (double s : t) forcing.push_back((alpha + beta * s) * mode);
    for (double lambda : {0.05, 2.5, 400.0}) {
      const PropagatorSpec spec{lambda - k2, 1.0};
      const auto w = duhamel_convolve(spec, t, forcing);
      for (std::size_t i = 1; i < t.size(); ++i) {
        const double one = -std::expm1(-lambda * t[i]);
        const double expected = alpha * one / lambda + beta * (t[i] / lambda - one / (lambda * lambda));
        CHECK(std::abs(w[i].coef[f] / mode.coef[f] - expected) < 1e-12 * std::abs(expected));
      }
    }
  }
  SUBCASE("zero forcing and bad grids") {
    std::vector<ScalarField> zero(t.size(), ScalarField(g));
    for (const auto& w : duhamel_convolve(PropagatorSpec{1.0, 1.0}, t, zero)) CHECK(max_abs(w) == 0.0);
    std::vector<double> bad = t;
    std::swap(bad[3], bad[4]);
    CHECK_THROWS_AS(duhamel_convolve(PropagatorSpec{1.0, 1.0}, bad, zero), std::invalid_argument);
  }
}

TEST_CASE("physical products") {
  auto g = make_grid(16);
  SUBCASE("antisymmetry") {
    const auto a = random_vector(g, 5);
    CHECK(max_abs(cross(a, a)) < 1e-15);
  }
  SUBCASE("Taylor-Green advection is a gradient") {
    auto u = sample_vector(g, [](P3 x) {
      return P3{std::cos(x[0]) * std::sin(x[1]), -std::sin(x[0]) * std::cos(x[1]), 0.0};
    });
    auto expected = sample_vector(g, [](P3 x) {
      return P3{-0.5 * std::sin(2 * x[0]), -0.5 * std::sin(2 * x[1]), 0.0};
    });
    const auto adv = advection(u, u);
    CHECK(max_abs_diff(adv, expected) < 1e-15);
    CHECK(max_abs(leray_project(adv)) < 1e-15);
  }
  SUBCASE("triple product BAC-CAB") {
    auto a = sample_vector(g, [](P3 x) { return P3{std::cos(x[1]), 0.0, 0.0}; });
    auto c = sample_vector(g, [](P3 x) { return P3{0.0, std::cos(x[2]), 0.0}; });
    // a x (a x c) = a (a.c) - c (a.a) = -e2 cos x3 cos^2 x2
    auto expected = sample_vector(g, [](P3 x) {
      return P3{0.0, -std::cos(x[2]) * std::cos(x[1]) * std::cos(x[1]), 0.0};
    });
    CHECK(max_abs_diff(triple(a, a, c), expected) < 1e-12);
    CHECK(max_abs_diff(physical_product(ProductKind::triple, a, a, c), expected) < 1e-12);

    // generic low-mode fields against the pointwise formula
    auto low = [&](int seed) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> n;
      VectorField v(g);
      for (int d = 0; d < 3; ++d)
        for (auto k : {std::array{1, 0, 0}, std::array{0, 1, 0}, std::array{1, -1, 1}})
          testing::set_mode(*g, v.comp[d], k[0], k[1], k[2], {n(rng), n(rng)});
      return v;
    };
    const auto x = low(1), y = low(2), z = low(3);
    const auto px = to_physical(x), py = to_physical(y), pz = to_physical(z);
    PhysicalVector ref;
    for (auto& comp : ref) comp.resize(g->size());
    for (std::size_t f = 0; f < g->size(); ++f) {
      const double xz = px[0][f] * pz[0][f] + px[1][f] * pz[1][f] + px[2][f] * pz[2][f];
      const double xy = px[0][f] * py[0][f] + px[1][f] * py[1][f] + px[2][f] * py[2][f];
      for (int d = 0; d < 3; ++d) ref[d][f] = py[d][f] * xz - pz[d][f] * xy;
    }
    CHECK(max_abs_diff(triple(x, y, z), from_physical(g, ref, true)) < 1e-12);
  }
  SUBCASE("curl cross and scalar products") {
    auto u = sample_vector(g, [](P3 x) { return P3{0.0, std::sin(x[0]), 0.0}; });
    auto b = sample_vector(g, [](P3 x) { return P3{1.0 * std::cos(x[2]), 0.0, 0.0}; });
    b = leray_project(b);
    // curl u = (0, 0, cos x1); (curl u) x b = (0, cos x1 cos x3, 0)
    auto expected = sample_vector(g, [](P3 x) { return P3{0.0, std::cos(x[0]) * std::cos(x[2]), 0.0}; });
    CHECK(max_abs_diff(curl_cross(u, b), expected) < 1e-15);
    CHECK(max_abs_diff(physical_product(ProductKind::curl_cross, u, b), expected) < 1e-15);
  }
  SUBCASE("outputs are real and masked") {
    const auto a = random_vector(g, 8), b = random_vector(g, 9);
    const auto p = advection(a, b);
    CHECK(hermitian_defect(p) < 1e-15);
    for (std::size_t f = 0; f < g->size(); ++f)
      if (!g->kept(f)) CHECK(p.comp[0][f] == Complex{});
  }
  SUBCASE("grid mismatch") {
    auto h = make_grid(8);
    CHECK_THROWS_AS(cross(random_vector(g, 1), random_vector(h, 1)), GridMismatchError);
  }
}
