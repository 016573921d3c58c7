// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include "bcsgp/asymptotics/asymptotics.hpp"
#include "bcsgp/cli/commands.hpp"
#include "bcsgp/oracles/oracles.hpp"
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

using namespace bcsgp;
using numerics::RadialFunction;
using numerics::RadialGrid;
using numerics::Trap;
constexpr double pi = std::numbers::pi;

namespace {

struct Shared {
  std::shared_ptr<const twobody::TwoBodySolution> sol;
  asymptotics::Study study;
};

Shared &model() {
  static Shared m = [] {
    Shared s;
    const auto V = twobody::tune_gaussian_well(1.0, 1.0);
    s.sol = std::make_shared<const twobody::TwoBodySolution>(twobody::solve_two_body(V));
    s.study = asymptotics::make_study(s.sol, Trap::harmonic(), gp::default_trap_grid());
    return s;
  }();
  return m;
}

struct Gaussian {
  oracles::GaussianCase c;
  bcs::PairKernel k;
};

Gaussian gaussian(double h, double D) {
  oracles::GaussianCase c;
  c.h = h;
  c.D = D;
  c = c.normalized();
  auto gx = RadialGrid::build(8.0, 4000);
  auto gr = RadialGrid::build(20.0, 4000);
  auto psi = RadialFunction::sample(gx, [&](double r) { return c.A * std::exp(-c.a * r * r); });
  auto a0 = RadialFunction::sample(gr, [&](double r) { return c.B * std::exp(-c.b * r * r); });
  auto sol = std::make_shared<const twobody::TwoBodySolution>(twobody::synthetic_two_body(a0, c.E0));
  return {c, bcs::build_pair_kernel(psi, sol, h)};
}

bool c1(std::ostream &os) {
  const auto t = gp::solve_trap_ground(Trap::harmonic(), gp::default_trap_grid());
  const auto ref = RadialFunction::sample(t.psi_W.grid_ptr(), [](double r) { return std::exp(-r * r); });
  const double ov = std::abs(t.psi_W.inner(ref)) / (t.psi_W.norm2() * ref.norm2());
  os << "E_W = " << t.E_W << ", 1 - overlap = " << 1.0 - ov;
  return std::abs(t.E_W - 1.5) <= 1e-6 && ov >= 1.0 - 1e-8;
}

bool c2(std::ostream &os) {
  const auto sol = twobody::solve_ground_state(numerics::Interaction::spherical_well(4.0, 1.0));
  const double ref = *oracles::square_well_oracle(4.0, 1.0);
  bool none = false, some = true;
  try {
    twobody::solve_ground_state(numerics::Interaction::spherical_well(2.4, 1.0));
  } catch (const twobody::NoBoundState &) {
    none = true;
  }
  try {
    twobody::solve_ground_state(numerics::Interaction::spherical_well(2.6, 1.0));
  } catch (const twobody::NoBoundState &) {
    some = false;
  }
  os << "E0 = " << sol.E0 << " vs " << ref << "; V0=2.4 unbound: " << none
     << ", V0=2.6 bound: " << some;
  return std::abs(sol.E0 - ref) <= 1e-6 && none && some;
}

bool c3(std::ostream &os) {
  auto g = RadialGrid::build(20.0, 4000);
  const double c = std::pow(pi, -0.75);
  auto a0 = RadialFunction::sample(g, [&](double r) { return c * std::exp(-r * r / 2); });
  const auto sol = twobody::synthetic_two_body(a0, 0.5);
  const double gb = twobody::compute_g_bcs(sol.alpha0_hat, 0.5);
  const double ref = 8.0 * std::pow(pi / 2.0, 1.5) * 1.25;
  os << "g_BCS = " << gb << " vs " << ref;
  return std::abs(gb - ref) <= 1e-3;
}

bool c4(std::ostream &os) {
  const auto &m = model();
  const auto W = Trap::harmonic();
  const double g = m.study.g_bcs;
  const auto grid = m.study.trap_grid;
  const auto below = gp::minimize_gp_unconstrained(W, m.study.E_W - 0.1, g, grid);
  const double delta = 0.05;
  const auto above = gp::minimize_gp_unconstrained(W, m.study.E_W + delta, g, grid);
  const double bound = -delta * delta / (4.0 * g * std::pow(pi, -1.5));
  os << "below: E = " << below.energy << ", ||psi|| = " << below.psi_star.norm2()
     << "; above: E = " << above.energy << ", bound = " << bound
     << ", E/bound = " << above.energy / bound;
  return below.energy == 0.0 && below.psi_star.norm2() <= 1e-4 && above.converged &&
         above.energy <= bound && above.energy >= 1.1 * bound;
}

bool c5(std::ostream &os) {
  const auto &m = model();
  double worst = 0.0;
  int runs = 0;
  for (const Trap &W : {Trap::harmonic(), Trap::harmonic(4.0), Trap::power(4.0, 1.0)}) {
    const double E_W = gp::solve_trap_ground(W, m.study.trap_grid).E_W;
    for (double g : {m.study.g_bcs, 1.0})
      for (double off : {0.05, 0.2, 0.5, 1.0}) {
        const auto r = gp::minimize_gp_unconstrained(W, E_W + off, g, m.study.trap_grid);
        if (!r.converged || r.psi_star.max_abs() == 0.0)
          continue;
        worst = std::max(worst, gp::gl_split(r, W).identity_residual);
        ++runs;
      }
  }
  os << runs << " converged runs with N > 0, worst identity residual " << worst;
  return runs == 24 && worst <= 1e-6;
}

bool c6(std::ostream &os) {
  const auto &m = model();
  const auto W = Trap::harmonic();
  const double h = 0.3, D = m.study.E_W + 0.5;
  const auto r = gp::minimize_gp_unconstrained(W, D, m.study.g_bcs, m.study.trap_grid);
  const auto k = bcs::build_pair_kernel(r.psi_star, m.sol, h);
  const auto q = bcs::quadratic_energy(k, W, D);
  const auto n = gp::field_norms(r.psi_star, W);
  const double scale = n.l2_sq / h;
  const double m2 = std::pow(m.sol->alpha0.weighted_norm2(1.0), 2);
  const double closed = h * n.trap + 0.25 * h * h * h * n.l2_sq * m2;
  const double rel = std::abs(q.w_term / closed - 1.0);
  const auto gs = gaussian(h, 0.0);
  const double grel = std::abs(bcs::quadratic_energy(gs.k, W, 0.0).w_term /
                                   oracles::GaussianOracle::w_term(gs.c) - 1.0);
  os << "relative residual / (h^-1 ||psi||^2) = " << q.relative_residual / scale
     << "; W-term rel. error " << rel << " (psi*), " << grel << " (Gaussian)";
  return std::abs(q.relative_residual) <= 1e-6 * scale && rel <= 1e-6 && grel <= 1e-6;
}

bool c7(std::ostream &os) {
  const auto gs = gaussian(0.4, 0.5);
  const auto ref = oracles::GaussianOracle::quartic(gs.c);
  bcs::MCOptions opt;
  opt.samples = 10000000;
  opt.seed = 1;
  const auto q = bcs::quartic_trace_mc(gs.k, Trap::harmonic(gs.c.w), gs.c.D, opt);
  const double z = std::abs(q.hbar.mean - ref.hbar) / q.hbar.stderr_;
  const double rel = q.hbar.stderr_ / std::abs(q.hbar.mean);
  os << "tr hbar (aa*)^2 = " << q.hbar.mean << " +- " << q.hbar.stderr_ << " vs " << ref.hbar
     << " (" << z << " stderr, rel. stderr " << rel << "); kinetic "
     << (q.kinetic.mean - ref.kinetic) / q.kinetic.stderr_ << ", trap "
     << (q.trap.mean - ref.trap) / q.trap.stderr_ << ", plain "
     << (q.plain.mean - ref.plain) / q.plain.stderr_ << " stderr";
  return z <= 3.0 && rel <= 1e-2;
}

bool c8(std::ostream &os) {
  auto s = model().study;
  s.mc.samples = 1000000;
  const auto rec = asymptotics::h_sweep(s, s.E_W + 0.5, {0.5, 0.4, 0.3, 0.2, 0.15});
  for (const auto &p : rec.points)
    os << "h=" << p.h << ": " << p.residual.mean << "+-" << p.residual.stderr_ << "; ";
  if (!rec.fit) {
    os << "no fit: " << rec.fit_error;
    return false;
  }
  os << "exponent " << rec.fit->exponent << ", R^2 " << rec.fit->r2 << ", monotone "
     << rec.monotone;
  return rec.fit->exponent >= 0.9 && rec.fit->exponent <= 2.1 && rec.fit->r2 >= 0.95 &&
         rec.monotone;
}

bool c9(std::ostream &os) {
  auto s = model().study;
  s.mc.samples = 200000;
  bool ok = true;
  double prev = INFINITY;
  for (double h : {0.4, 0.3, 0.2}) {
    const auto cp = asymptotics::estimate_mu_c(s, h, s.E_W, s.E_W + 0.5);
    const bool cert = cp.hi - cp.lo <= 1e-3 && cp.f_lo.mean >= 0.0 && cp.f_hi.mean < 0.0 &&
                      std::isfinite(cp.uncertainty) && cp.uncertainty > 0.0;
    ok = ok && cert && cp.gap < prev;
    prev = cp.gap;
    os << "h=" << h << ": D_c " << cp.D_c << " +- " << cp.uncertainty << ", |D_c - E_W| "
       << cp.gap << ", bracket " << cp.hi - cp.lo << "; ";
  }
  return ok;
}

bool c10(std::ostream &os) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = cli::identity_checks();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = secs < 60.0;
  for (const auto &c : checks) {
    ok = ok && c.passed;
    if (!c.passed)
      os << c.name << " FAILED (" << c.value << " vs " << c.tolerance << "); ";
  }
  os << checks.size() << " identities in " << secs << " s";
  return ok;
}

} // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<bool(std::ostream &)>>> criteria{
      {"harmonic trap ground state", c1},
      {"square well oracle and threshold", c2},
      {"g_BCS for Gaussian input", c3},
      {"GP criticality", c4},
      {"GL splitting identity", c5},
      {"trial-state quadratic structure at h = 0.3", c6},
      {"quartic Monte Carlo vs Gaussian oracle", c7},
      {"energy expansion scaling over h", c8},
      {"critical offset trend", c9},
      {"identity suite", c10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::ostringstream detail;
    bool pass = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      pass = criteria[i].second(detail);
    } catch (const std::exception &e) {
      detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%zu] %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
