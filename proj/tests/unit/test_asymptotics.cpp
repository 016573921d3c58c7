#include "bcsgp/asymptotics/asymptotics.hpp"
#include <cmath>
#include <doctest.h>

using namespace bcsgp;
using namespace bcsgp::asymptotics;

namespace {
std::vector<FitPoint> sampled(const std::function<double(double)> &f) {
  std::vector<FitPoint> v;
  for (double h : {0.5, 0.4, 0.3, 0.2, 0.15})
    v.push_back({h, f(h), 0.0});
  return v;
}

Study gaussian_study() {
  auto g = numerics::RadialGrid::build(20.0, 4000);
  const double c = std::pow(std::numbers::pi, -0.75);
  auto a0 = RadialFunction::sample(g, [&](double r) { return c * std::exp(-r * r / 2); });
  auto sol = std::make_shared<const twobody::TwoBodySolution>(twobody::synthetic_two_body(a0, 0.5));
  auto s = make_study(sol, Trap::harmonic(), gp::default_trap_grid());
  s.mc.samples = 4000;
  return s;
}
} // namespace

TEST_CASE("power-law fit recovers exact exponents") {
  auto f2 = fit_power_law(sampled([](double h) { return 3.0 * h * h; }));
  CHECK(std::abs(f2.exponent - 2.0) < 1e-6);
  CHECK(std::abs(f2.prefactor - 3.0) < 1e-6);
  CHECK(f2.r2 > 1.0 - 1e-12);
  auto f1 = fit_power_law(sampled([](double h) { return -0.7 * h; }));
  CHECK(std::abs(f1.exponent - 1.0) < 1e-6);
  auto fm = fit_power_law(sampled([](double h) { return h + 2.0 * h * h; }));
  CHECK(fm.exponent > 1.0);
  CHECK(fm.exponent < 2.0);
}

TEST_CASE("power-law fit excludes insignificant points and needs four") {
  auto pts = sampled([](double h) { return h; });
  pts[4].stderr_ = 1.0;
  pts[3].stderr_ = 1.0;
  CHECK_THROWS_AS(fit_power_law(pts), FitError);
  pts[4].stderr_ = 0.01;
  pts[3].stderr_ = 0.01;
  const auto f = fit_power_law(pts);
  CHECK(f.used == 5);
  CHECK(f.excluded == 0);
  pts.pop_back();
  pts[0].value = 0.0;
  CHECK_THROWS_AS(fit_power_law(pts), FitError);
}

TEST_CASE("sweep with zero field has zero residuals and refuses to fit") {
  const auto s = gaussian_study();
  const auto zero = RadialFunction::zero(s.trap_grid);
  const auto rec = h_sweep(s, 1.0, {0.5, 0.4, 0.3, 0.2}, zero);
  for (const auto &p : rec.points) {
    CHECK(p.valid);
    CHECK(p.residual.mean == 0.0);
  }
  CHECK_FALSE(rec.fit);
  CHECK_FALSE(rec.fit_error.empty());
}

TEST_CASE("sweep validates the h list and is reproducible") {
  const auto s = gaussian_study();
  CHECK_THROWS_AS(h_sweep(s, 2.0, {0.3, 0.4}), ConfigError);
  CHECK_THROWS_AS(h_sweep(s, 2.0, {1.2, 0.4}), ConfigError);
  const auto a = h_sweep(s, s.E_W + 0.3, {0.4, 0.3, 0.2});
  const auto b = h_sweep(s, s.E_W + 0.3, {0.4, 0.3, 0.2});
  CHECK_FALSE(a.fit);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].valid);
    CHECK(a.points[i].residual.mean == b.points[i].residual.mean);
    CHECK(a.points[i].residual.stderr_ == b.points[i].residual.stderr_);
  }
}

TEST_CASE("normal phase below E_W and bracket without sign change") {
  auto s = gaussian_study();
  const auto ev = trial_energy_at(s, 0.3, s.E_W - 0.2);
  CHECK(ev.normal);
  CHECK(ev.energy.mean == 0.0);
  CHECK_THROWS_AS(estimate_mu_c(s, 0.3, s.E_W - 0.3, s.E_W - 0.1), NoSignChange);
}
