#include "bcsgp/bcs/bcs.hpp"
#include "bcsgp/gp/gp.hpp"
#include "bcsgp/numerics/grid.hpp"
#include "bcsgp/oracles/oracles.hpp"
#include <cmath>
#include <doctest.h>
#include <numbers>

using namespace bcsgp;
using namespace bcsgp::bcs;
using numerics::RadialGrid;
using oracles::GaussianCase;
using oracles::GaussianOracle;
constexpr double pi = std::numbers::pi;

namespace {
struct Setup {
  GaussianCase c;
  PairKernel k;
  Trap W;
};

Setup gaussian_setup(double h, double D = 0.0, double amp = 1.0) {
  GaussianCase c;
  c.h = h;
  c.D = D;
  c = c.normalized();
  c.A *= amp;
  auto gx = RadialGrid::build(8.0, 4000);
  auto gr = RadialGrid::build(20.0, 4000);
  auto psi = RadialFunction::sample(gx, [&](double r) { return c.A * std::exp(-c.a * r * r); });
  auto a0 = RadialFunction::sample(gr, [&](double r) { return c.B * std::exp(-c.b * r * r); });
  auto sol = std::make_shared<const twobody::TwoBodySolution>(twobody::synthetic_two_body(a0, c.E0));
  return {c, build_pair_kernel(psi, sol, h), Trap::harmonic(c.w)};
}

} // namespace

TEST_CASE("Hilbert-Schmidt identity against independent quadrature") {
  for (double h : {0.5, 0.3}) {
    const auto s = gaussian_setup(h);
    const double exact = s.k.hs_norm_sq();
    CHECK(std::abs(exact - GaussianOracle::hs_norm_sq(s.c)) < 1e-10 * exact);
    const double quad = hs_norm_sq_by_quadrature(s.k, 7.0);
    CHECK(std::abs(quad - exact) < 1e-8 * exact);
  }
}

TEST_CASE("Nystrom spectrum of a rank-one kernel") {
  auto u = [](double r) { return std::exp(-r * r) * (1.0 + r); };
  KernelDiscretization d{8.0, 16.0, 0.25, 0.25, 8};
  const auto spec = radial_kernel_spectrum(
      [&](double r, double rp, double) { return u(r) * u(rp); }, d, 2);
  // ||u||^2 over R^3; the kernel has rank one in l = 0 and vanishes above.
  const auto g = numerics::composite_gauss_legendre(0.0, 8.0, 64, 8);
  double n2 = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    n2 += 4 * pi * g.w[i] * g.x[i] * g.x[i] * u(g.x[i]) * u(g.x[i]);
  double top = 0.0, rest = 0.0;
  for (std::size_t l = 0; l < spec.size(); ++l)
    for (double e : spec[l]) {
      if (l == 0 && std::abs(e) > top)
        top = std::abs(e);
      else if (l > 0 || std::abs(e) < 0.5 * n2)
        rest = std::max(rest, std::abs(e));
    }
  CHECK(std::abs(top - n2) < 1e-8 * n2);
  CHECK(rest < 1e-8 * n2);
}

TEST_CASE("Gaussian trial: top singular value and Schatten norms") {
  const auto s = gaussian_setup(0.5);
  const double s1 = top_singular_value(s.k);
  CHECK(std::abs(s1 / GaussianOracle::top_singular(s.c) - 1.0) < 1e-6);
  const auto rep = schatten_norms(s.k, {2, 4, 6});
  CHECK(std::abs(rep.hs_computed / rep.hs_exact - 1.0) < 1e-4);
  for (const auto &v : rep.values) {
    const double ref = GaussianOracle::schatten(s.c, v.n);
    CHECK(std::abs(v.value - ref) <= 1e-6 * ref + v.tail_bound);
    CHECK(v.ratio > 0.0);
  }
}

TEST_CASE("admissibility: closed-form lambda and failure below it") {
  const double s1 = 0.1, h = 0.3, delta = 1e-9;
  // p = delta is a quadratic in y = 1 + lambda h.
  const double s2 = s1 * s1;
  const double y = ((1 - 2 * s2) - std::sqrt(std::pow(1 - 2 * s2, 2) - 4 * s2 * s2 * (1 + delta))) /
                   (2 * s2 * s2);
  const double expect = (y - 1) / h;
  const double lam = admissibility_lambda(s1, h, delta);
  CHECK(std::abs(lam - expect) < 1e-8 * expect);
  CHECK(admissibility_polynomial(lam, h, s1) >= delta);
  CHECK(admissibility_polynomial(0.5 * lam, h, s1) < delta);
  CHECK(admissibility_lambda(0.0, h, delta) == 0.0);
  CHECK_THROWS_AS(admissibility_lambda(0.8, h, delta), Inadmissible);
}

TEST_CASE("decomposition of the trial family and of a perturbed kernel") {
  auto s = gaussian_setup(0.4);
  Diagnostics diag;
  auto d = decompose_alpha(s.k, &diag);
  CHECK(d.psi_error < 1e-9);
  CHECK(d.remainder_norm_sq < 1e-12 * d.alpha_norm_sq);
  CHECK(d.pythagoras_residual < 1e-10);
  CHECK(diag.warnings.empty());

  const auto &a0 = s.k.alpha0();
  const double m2 = 3.0 / (4.0 * s.c.b);
  auto chi = RadialFunction::sample(s.k.psi.grid_ptr(), [](double r) { return std::exp(-2 * r * r); });
  auto rho = RadialFunction::sample(a0.grid_ptr(), [&](double r) { return (r * r - m2) * a0(r); });
  s.k.remainder = Remainder{chi, rho};
  d = decompose_alpha(s.k, &diag);
  CHECK(std::abs(d.input_defect) < 1e-10);
  CHECK(d.psi_error < 1e-9);
  CHECK(d.orthogonality_defect < 1e-10);
  CHECK(d.pythagoras_residual < 1e-10);
  CHECK(d.remainder_norm_sq > 0.0);

  // Non-orthogonal input: the projection moves the overlap into psi.
  s.k.remainder = Remainder{chi, a0};
  d = decompose_alpha(s.k, &diag);
  CHECK(std::abs(d.input_defect - 1.0) < 1e-10);
  CHECK(d.psi_error > 1e-3);
  CHECK(d.orthogonality_defect < 1e-10);
  CHECK(d.pythagoras_residual < 1e-10);
  CHECK_FALSE(diag.warnings.empty());
}

TEST_CASE("quadratic terms against closed forms") {
  const auto s = gaussian_setup(0.3, 0.7);
  const auto q = quadratic_energy(s.k, s.W, s.c.D);
  const double l2 = GaussianOracle::l2_norm_sq(s.c.A, s.c.a);
  CHECK(std::abs(q.com_kinetic - 0.25 * s.c.h * GaussianOracle::grad_norm_sq(s.c.A, s.c.a)) < 1e-5 * q.com_kinetic);
  CHECK(std::abs(q.relative_residual - l2 / s.c.h * (3 * s.c.b + s.c.E0)) < 1e-7);
  CHECK(std::abs(q.w_term - GaussianOracle::w_term(s.c)) < 1e-9);
  CHECK(std::abs(q.d_term + s.c.h * s.c.D * l2) < 1e-9);
  CHECK(std::abs(q.total - (q.com_kinetic + q.relative_residual + q.w_term + q.d_term)) < 1e-14);

  auto k2 = s.k;
  k2.remainder = Remainder{s.k.psi, s.k.alpha0()};
  CHECK_THROWS_AS(quadratic_energy(k2, s.W, 0.0), ConfigError);
}

TEST_CASE("quartic Monte Carlo against the Gaussian closed form") {
  const auto s = gaussian_setup(0.4, 0.5);
  const auto ref = GaussianOracle::quartic(s.c);
  MCOptions opt;
  opt.samples = 200000;
  opt.seed = 7;
  opt.threads = 4;
  const auto mc = quartic_trace_mc(s.k, s.W, s.c.D, opt);
  auto close = [](const Estimate &e, double want) {
    return std::abs(e.mean - want) <= 4.0 * e.stderr_ + 1e-6 * std::abs(want);
  };
  CHECK(close(mc.kinetic, ref.kinetic));
  CHECK(close(mc.trap, ref.trap));
  CHECK(close(mc.plain, ref.plain));
  CHECK(close(mc.hbar, ref.hbar));
  MESSAGE("hbar " << mc.hbar.mean << " +- " << mc.hbar.stderr_ << " ref " << ref.hbar);

  // Bitwise reproducible across thread counts; error falls like N^-1/2.
  opt.threads = 1;
  const auto one = quartic_trace_mc(s.k, s.W, s.c.D, opt);
  CHECK(one.hbar.mean == mc.hbar.mean);
  CHECK(one.hbar.stderr_ == mc.hbar.stderr_);
  opt.samples = 800000;
  opt.threads = 4;
  const auto big = quartic_trace_mc(s.k, s.W, s.c.D, opt);
  const double ratio = mc.hbar.stderr_ / big.hbar.stderr_;
  CHECK(ratio > 1.7);
  CHECK(ratio < 2.3);
}

TEST_CASE("zero field gives zero energies") {
  auto s = gaussian_setup(0.4);
  s.k.psi = RadialFunction::zero(s.k.psi.grid_ptr());
  CHECK(top_singular_value(s.k) == 0.0);
  const auto t = make_trial_state(s.k);
  CHECK(t.lambda == 0.0);
  const auto e = trial_bcs_energy(t, s.W, 0.0, 1.0, MCOptions{1000, 1, 1});
  CHECK(e.total_bcs.mean == 0.0);
  CHECK(e.total_bcs.stderr_ == 0.0);
  CHECK(e.gp_reference == 0.0);
}

TEST_CASE("trial energy assembles the pieces") {
  const auto s = gaussian_setup(0.4, 0.3, 0.3);
  const auto t = make_trial_state(s.k);
  CHECK(t.margin >= t.delta);
  const double g = GaussianOracle::g_bcs(s.c.B, s.c.b, s.c.E0);
  const auto e = trial_bcs_energy(t, s.W, s.c.D, g, MCOptions{50000, 3, 2});
  const double y = 1 + t.lambda * s.c.h;
  CHECK(std::abs(e.total_bcs.mean - (e.quad.total + y * e.quartic.hbar.mean)) < 1e-12);
  CHECK(std::abs(e.gp_reference - s.c.h * GaussianOracle::gp_energy(s.c, g)) < 1e-6 * std::abs(e.gp_reference));
}
