#include "bcsgp/numerics/eigensolver.hpp"
#include "bcsgp/numerics/errors.hpp"
#include "bcsgp/numerics/fourier.hpp"
#include "bcsgp/numerics/grid.hpp"
#include "bcsgp/numerics/model.hpp"
#include "bcsgp/numerics/roots.hpp"
#include "bcsgp/oracles/oracles.hpp"
#include <cmath>
#include <doctest.h>
#include <numbers>
#include <random>

using namespace bcsgp;
using namespace bcsgp::numerics;
constexpr double pi = std::numbers::pi;

TEST_CASE("grid rejects bad input") {
  CHECK_THROWS_AS(RadialGrid::build(8.0, 4), ConfigError);
  CHECK_THROWS_AS(RadialGrid::build(-1.0, 100), ConfigError);
}

TEST_CASE("uniform grid spacing and monomial exactness") {
  auto g = RadialGrid::build(8.0, 2000);
  CHECK(g->step() == doctest::Approx(0.004).epsilon(1e-14));
  CHECK(g->r(g->size() - 1) == 8.0);
  std::vector<double> one(g->size(), 1.0);
  CHECK(std::abs(g->integrate(one) / (512.0 / 3.0) - 1.0) < 1e-12);
  for (double w : g->weights())
    CHECK(w > 0.0);
  // Even polynomials times r^2 are exact.
  for (int k = 0; k <= 8; k += 2) {
    std::vector<double> f(g->size());
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] = std::pow(g->r(i), k);
    const double exact = std::pow(8.0, k + 3) / (k + 3);
    CHECK(std::abs(g->integrate(f) / exact - 1.0) < 1e-12);
  }
}

TEST_CASE("graded grid clusters near the origin and integrates exactly") {
  auto g = RadialGrid::build(10.0, 400, GridScheme::graded);
  CHECK(g->r(1) - g->r(0) < g->r(g->size() - 1) - g->r(g->size() - 2));
  std::vector<double> one(g->size(), 1.0);
  CHECK(std::abs(g->integrate(one) / (1000.0 / 3.0) - 1.0) < 1e-12);
}

TEST_CASE("Gauss-Legendre integrates polynomials") {
  GaussLegendre gl(12);
  double s = 0.0;
  for (std::size_t i = 0; i < 12; ++i)
    s += gl.w[i] * std::pow(gl.x[i], 22);
  CHECK(s == doctest::Approx(2.0 / 23.0).epsilon(1e-13));
}

TEST_CASE("interpolation of a smooth even function") {
  auto g = RadialGrid::build(8.0, 2000);
  auto f = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  for (double r : {0.0, 0.0011, 0.5, 1.2345, 3.0}) {
    CHECK(std::abs(f(r) - std::exp(-r * r)) < 1e-9);
  }
  CHECK(f(9.0) == 0.0);
  CHECK(f.norm2() == doctest::Approx(std::pow(pi / 2.0, 0.75)).epsilon(1e-12));
}

TEST_CASE("radial Laplacian of a Gaussian") {
  auto g = RadialGrid::build(8.0, 4000);
  auto f = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  auto lap = radial_laplacian(f);
  double err = 0.0;
  for (std::size_t i = 0; i + 2 < g->size(); ++i) {
    const double r = g->r(i);
    err = std::max(err, std::abs(lap[i] - (4.0 * r * r - 6.0) * std::exp(-r * r)));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("harmonic trap ground state") {
  auto g = RadialGrid::build(8.0, 8000);
  auto W = RadialFunction::sample(g, [](double r) { return r * r; });
  const auto pairs = radial_eigensolve(W, 0.25, 0, 3);
  const auto exact = oracles::harmonic_oracle(0.25, 1.0);
  CHECK(std::abs(pairs[0].energy - exact.energy) < 1e-6);
  // Excited l=0 levels of -1/4 Delta + r^2: 1.5 + 2k.
  CHECK(std::abs(pairs[1].energy - 3.5) < 1e-5);
  CHECK(pairs[0].residual < 1e-8 * 1.5);
  auto gauss = RadialFunction::sample(g, [&](double r) {
    return std::pow(2.0 * exact.gamma / pi, 0.75) * std::exp(-exact.gamma * r * r);
  });
  CHECK(pairs[0].f.inner(gauss) >= 1.0 - 1e-8);
  CHECK(std::abs(pairs[0].f.inner(pairs[1].f)) < 1e-8);
  CHECK(std::abs(pairs[1].f.inner(pairs[2].f)) < 1e-8);
}

TEST_CASE("harmonic trap in higher sectors and scaling") {
  auto g = RadialGrid::build(8.0, 8000);
  auto W = RadialFunction::sample(g, [](double r) { return 4.0 * r * r; });
  const auto p = radial_eigensolve(W, 0.25, 1, 1);
  // -1/4 Delta + c r^2: E = sqrt(c)(1.5 + l).
  CHECK(std::abs(p[0].energy - 2.0 * 2.5) < 1e-5);
}

TEST_CASE("second-order convergence of the eigenvalue") {
  std::vector<double> err;
  for (std::size_t n : {500, 1000, 2000}) {
    auto g = RadialGrid::build(8.0, n);
    auto W = RadialFunction::sample(g, [](double r) { return r * r; });
    err.push_back(std::abs(radial_eigensolve(W, 0.25, 0, 1)[0].energy - 1.5));
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("spherical well against the transcendental oracle") {
  const double E0 = *oracles::square_well_oracle(4.0, 1.0);
  auto g = RadialGrid::build(20.0, 20000);
  const auto V = Interaction::spherical_well(4.0, 1.0);
  std::vector<double> pot(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->r(i);
    pot[i] = V.cell_average(r - 0.5 * g->step(), r + 0.5 * g->step());
  }
  const auto p = radial_eigensolve(pot, 1.0, 0, g, 1);
  CHECK(std::abs(-p[0].energy - E0) < 1e-6);
  // Root finder agrees with the oracle.
  const auto res = find_root_scalar(
      [](double k) { return k / std::tan(k) + std::sqrt(4.0 - k * k); }, pi / 2 + 1e-9,
      2.0 - 1e-12, 1e-14);
  CHECK(std::abs(4.0 - res.root * res.root - E0) < 1e-10);
}

TEST_CASE("root finding") {
  CHECK(find_root_scalar([](double x) { return x - 2.0; }, 0.0, 5.0).root ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(find_root_scalar([](double x) { return x * x - 2.0; }, 1.0, 2.0).root -
                 std::sqrt(2.0)) < 1e-10);
  CHECK_THROWS_AS(find_root_scalar([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                  DomainError);
}

TEST_CASE("Fourier transform: Gaussian fixed point, unitarity, roundtrip") {
  auto g = RadialGrid::build(20.0, 4000);
  auto pg = g->dual();
  const double c = std::pow(pi, -0.75);
  auto f = RadialFunction::sample(g, [&](double r) { return c * std::exp(-r * r / 2); });
  Diagnostics diag;
  auto fh = radial_fourier(f, pg, &diag);
  CHECK(diag.warnings.empty());
  double err = 0.0;
  for (std::size_t k = 0; k < pg->size(); ++k)
    err = std::max(err, std::abs(fh[k] - c * std::exp(-pg->r(k) * pg->r(k) / 2)));
  CHECK(err <= 1e-8);
  CHECK(std::abs(fh.norm2() / f.norm2() - 1.0) <= 1e-8);

  // Random smooth, decaying radial functions.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.3, 3.0);
  std::vector<double> coef(6), width(6);
  for (std::size_t k = 0; k < coef.size(); ++k) {
    coef[k] = nd(rng);
    width[k] = ud(rng);
  }
  auto rf = RadialFunction::sample(g, [&](double r) {
    double s = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k)
      s += coef[k] * std::pow(r, 2.0 * static_cast<double>(k)) * std::exp(-width[k] * r * r);
    return s;
  });
  auto rh = radial_fourier(rf, pg);
  CHECK(std::abs(rh.norm2() / rf.norm2() - 1.0) <= 1e-8);
  auto back = radial_fourier(rh, pg->dual());
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < g->size(); ++i)
    d = std::max(d, std::abs(back[i] - rf[i]));
  CHECK(d < 1e-10);

  // Direct summation agrees with the fast path and handles p = 0.
  auto coarse = RadialGrid::build(6.0, 60);
  auto direct = radial_fourier(f, coarse);
  for (std::size_t k = 0; k < coarse->size(); ++k)
    CHECK(std::abs(direct[k] - c * std::exp(-coarse->r(k) * coarse->r(k) / 2)) < 1e-9);
}

TEST_CASE("Fourier warns on an undecayed tail") {
  auto g = RadialGrid::build(5.0, 500);
  auto f = RadialFunction::sample(g, [](double r) { return std::exp(-0.1 * r); });
  Diagnostics diag;
  radial_fourier(f, g->dual(), &diag);
  CHECK(diag.warnings.size() == 1);
}

TEST_CASE("model validation") {
  PhysicsModel m;
  m.V = Interaction::gaussian_well(5.0);
  m.W = Trap::harmonic();
  m.h = 1.5;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m.h = 0.3;
  CHECK_NOTHROW(m.validate());
  const auto sw = Interaction::spherical_well(4.0, 1.0);
  CHECK(sw.cell_average(0.9, 1.1) == doctest::Approx(-2.0));
  CHECK(Trap::power(3.0, 2.0)(2.0) == doctest::Approx(16.0));
}
