#include "bcsgp/twobody/twobody.hpp"
#include "bcsgp/numerics/eigensolver.hpp"
#include "bcsgp/numerics/fourier.hpp"
#include "bcsgp/numerics/roots.hpp"
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bcsgp::twobody {

using namespace numerics;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> potential_on(const GridPtr &g, const Interaction &V) {
  std::vector<double> pot(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double lo = i == 0 ? 0.0 : 0.5 * (g->r(i - 1) + g->r(i));
    const double hi = i + 1 == g->size() ? g->r(i) : 0.5 * (g->r(i) + g->r(i + 1));
    pot[i] = V.cell_average(lo, hi);
  }
  return pot;
}

GridPtr box(double r_max, double spacing) {
  const auto n = static_cast<std::size_t>(std::ceil(r_max / spacing));
  return RadialGrid::build(spacing * static_cast<double>(n), n);
}

double initial_box(const Interaction &V, const GridSpec &spec) {
  if (spec.r_max > 0.0)
    return spec.r_max;
  return std::max(spec.min_r_max, 8.0 * V.length_scale());
}
} // namespace

TwoBodySolution solve_ground_state(const Interaction &V, const GridSpec &spec,
                                   Diagnostics *diag) {
  V.validate();
  if (!(spec.spacing > 0.0))
    throw ConfigError("two-body grid: spacing must be positive");
  if (V.length_scale() / spec.spacing < 32.0)
    throw ConfigError("two-body grid: spacing does not resolve the interaction "
                      "range with 32 nodes");

  double r_max = initial_box(V, spec);
  GridPtr g;
  std::vector<EigenPair> pairs;
  for (;;) {
    g = box(r_max, spec.spacing);
    const RadialOperator op(g, 1.0, 0, potential_on(g, V));
    const double E = tridiagonal_eigenvalues(op.sym_diag(), op.sym_off(), 1)[0];
    if (E < 0.0) {
      if (spec.r_max > 0.0)
        break;
      const double want = std::max(spec.min_r_max, spec.decay_lengths / std::sqrt(-E));
      if (want <= r_max * (1.0 + 1e-12))
        break;
      if (want > spec.max_r_max) {
        std::ostringstream os;
        os << "two-body: box " << want << " needed for decay, capped at "
           << spec.max_r_max;
        warn(diag, os.str());
        if (r_max >= spec.max_r_max)
          break;
        r_max = spec.max_r_max;
      } else {
        r_max = want;
      }
      continue;
    }
    if (spec.r_max > 0.0 || r_max >= spec.max_r_max) {
      std::ostringstream os;
      os << "no bound state for " << V.describe() << ": lowest eigenvalue " << E
         << " >= 0 on a box of radius " << r_max;
      throw NoBoundState(os.str(), E);
    }
    r_max = std::min(4.0 * r_max, spec.max_r_max);
  }
  pairs = radial_eigensolve(potential_on(g, V), 1.0, 0, g, 1, spec.eigen_tol);

  TwoBodySolution sol;
  sol.V = V;
  sol.E0 = -pairs[0].energy;
  sol.alpha0 = pairs[0].f;
  sol.residual = pairs[0].residual;
  const auto pot = potential_on(g, V);
  std::vector<double> k(g->size());
  for (std::size_t i = 0; i < g->size(); ++i)
    k[i] = -pot[i] * sol.alpha0[i];
  sol.kinetic_alpha0 = RadialFunction(g, std::move(k));
  sol.lowest_l1 = radial_eigensolve(pot, 1.0, 1, g, 1, spec.eigen_tol)[0].energy;
  if (sol.lowest_l1 < -sol.E0)
    throw ConvergenceError("two-body: l = 1 sector lies below the l = 0 ground state",
                           sol.lowest_l1);
  const RadialOperator op0(g, 1.0, 0, pot);
  const double second = tridiagonal_eigenvalues(op0.sym_diag(), op0.sym_off(), 2)[1];
  if (second < 0.0) {
    std::ostringstream os;
    os << "two-body: a second l = 0 bound state exists at " << second;
    warn(diag, os.str());
  }
  return sol;
}

GapResult compute_spectral_gap(const TwoBodySolution &sol, double epsilon,
                               int l_max, Diagnostics *diag) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("spectral gap: epsilon must lie in (0, 1)");
  if (l_max < 0)
    throw ConfigError("spectral gap: l_max must be >= 0");
  const auto &g = sol.alpha0.grid_ptr();
  std::vector<double> pot = potential_on(g, sol.V);
  for (double &p : pot)
    p += sol.E0;

  GapResult res;
  res.epsilon = epsilon;
  res.gap = 0.0;
  res.worst_sector = 0;
  for (int l = 0; l <= l_max; ++l) {
    const RadialOperator op(g, 1.0 - epsilon, l, pot);
    double lowest;
    if (l > 0) {
      lowest = tridiagonal_eigenvalues(op.sym_diag(), op.sym_off(), 1)[0];
    } else {
      // Lowest eigenvalue on the complement of v0 = M^{1/2} u0: the smallest
      // root of f(s) = v0^T (A - s)^{-1} v0, which lies between the two lowest
      // eigenvalues of A.
      const auto lam = tridiagonal_eigenvalues(op.sym_diag(), op.sym_off(), 2);
      const auto u0 = op.to_u(sol.alpha0);
      const auto mass = op.mass();
      std::vector<double> v0(u0.size());
      double nrm = 0.0;
      for (std::size_t i = 0; i < v0.size(); ++i) {
        v0[i] = std::sqrt(mass[i]) * u0[i];
        nrm += v0[i] * v0[i];
      }
      for (double &x : v0)
        x /= std::sqrt(nrm);
      const auto off = op.sym_off();
      auto secular = [&](double s) {
        std::vector<double> sub(off.begin(), off.end()), sup = sub, dg(v0.size());
        for (std::size_t i = 0; i < dg.size(); ++i)
          dg[i] = op.sym_diag()[i] - s;
        std::vector<double> x = v0;
        if (!tridiagonal_solve(sub, dg, sup, x))
          return std::nan("");
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
          dot += v0[i] * x[i];
        return dot;
      };
      const double tau = 1e-9 * std::max(1.0, lam[1] - lam[0]);
      const double lo = lam[0] + tau * (lam[1] - lam[0]);
      const double hi = lam[1] - tau * (lam[1] - lam[0]);
      const double flo = secular(lo), fhi = secular(hi);
      if (!(fhi > 0.0))
        lowest = lam[1];
      else if (!(flo < 0.0))
        lowest = lam[0];
      else
        lowest = find_root_scalar(secular, lo, hi, 1e-13).root;
    }
    res.per_sector.push_back(lowest);
    if (l == 0 || lowest < res.gap) {
      res.gap = lowest;
      res.worst_sector = l;
    }
  }
  if (!(res.gap > 0.0)) {
    std::ostringstream os;
    os << "spectral gap " << res.gap << " <= 0 for epsilon = " << epsilon
       << " (sector l = " << res.worst_sector << ")";
    throw GapViolated(os.str(), res.gap);
  }
  (void)diag;
  return res;
}

DecayFit fit_decay_rate(const RadialFunction &alpha0, Diagnostics *diag) {
  const auto &g = alpha0.grid();
  const double lo = 0.5 * g.r_max(), hi = 0.75 * g.r_max();
  const double floor = 1e-300;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.r(i);
    if (r < lo || r > hi)
      continue;
    const double u = std::abs(r * alpha0[i]);
    if (u <= floor)
      continue;
    const double y = std::log(u);
    pts.emplace_back(r, y);
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    ++n;
  }
  if (n < 50) {
    warn(diag, "decay fit: fewer than 50 tail nodes in the fit window");
    if (n < 2)
      throw DomainError("decay fit: tail window is empty");
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / nn;
  double ss = 0.0;
  for (const auto &[x, y] : pts)
    ss += (y - icpt - slope * x) * (y - icpt - slope * x);
  return {-slope, lo, hi, n, std::sqrt(ss / nn)};
}

Moments compute_moments(const TwoBodySolution &sol, double beta) {
  Moments m{};
  const auto &a = sol.alpha0;
  m.sqrt_r_l2 = a.weighted_norm2(0.5);
  m.r_l2 = a.weighted_norm2(1.0);
  m.r_beta_l2 = a.weighted_norm2(0.5 * beta);
  m.l1 = a.norm(1.0);
  {
    const auto &g = a.grid();
    const auto w = g.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      s += w[i] * std::abs(sol.V(g.r(i)) * a[i]);
    m.V_l1 = 4.0 * pi * s;
  }
  if (!sol.alpha0_hat.empty()) {
    m.hat_l2 = sol.alpha0_hat.norm(2.0);
    m.hat_l4 = sol.alpha0_hat.norm(4.0);
    m.hat_l6 = sol.alpha0_hat.norm(6.0);
  }
  for (double v : {m.sqrt_r_l2, m.r_l2, m.r_beta_l2, m.l1, m.V_l1})
    if (!std::isfinite(v))
      throw DomainError("two-body: a moment of alpha0 is not finite");
  return m;
}

double compute_g_bcs(const RadialFunction &alpha0_hat, double E0, Diagnostics *diag) {
  const auto &pg = alpha0_hat.grid();
  const double pmax = pg.r_max();
  if (pmax < 10.0 * std::sqrt(std::max(E0, 0.0)))
    warn(diag, "g_BCS: momentum grid shorter than 10 sqrt(E0)");
  const double last = alpha0_hat[pg.size() - 2];
  if (std::pow(last, 4) * pmax * pmax > 1e-12)
    warn(diag, "g_BCS: momentum tail |alpha0^|^4 p^2 above 1e-12");
  std::vector<double> f(pg.size());
  for (std::size_t k = 0; k < pg.size(); ++k) {
    const double p = pg.r(k);
    f[k] = (p * p + E0) * std::pow(alpha0_hat[k], 4);
  }
  return std::pow(2.0 * pi, 3) * pg.integrate3d(f);
}

double relative_form(const TwoBodySolution &sol) {
  if (sol.synthetic)
    return sol.alpha0.inner(sol.kinetic_alpha0);
  const auto &g = sol.alpha0.grid_ptr();
  auto pot = potential_on(g, sol.V);
  for (double &p : pot)
    p += sol.E0;
  const RadialOperator op(g, 1.0, 0, pot);
  const auto u = op.to_u(sol.alpha0);
  double s = op.stiffness_form(u);
  const auto M = op.mass();
  const auto P = op.diagonal_potential();
  for (std::size_t i = 0; i < u.size(); ++i)
    s += M[i] * P[i] * u[i] * u[i];
  return 4.0 * pi * s;
}

RadialFunction shifted_kinetic(const RadialFunction &f, double E0) {
  const auto lap = radial_laplacian(f);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = -lap[i] + E0 * f[i];
  return RadialFunction(f.grid_ptr(), std::move(v), f.parity());
}

Interaction tune_gaussian_well(double target_E0, double width, const GridSpec &spec) {
  if (!(target_E0 > 0.0))
    throw ConfigError("tune_gaussian_well: target E0 must be positive");
  GridSpec fixed = spec;
  if (fixed.r_max <= 0.0)
    fixed.r_max = std::max(spec.min_r_max, spec.decay_lengths / std::sqrt(target_E0));
  const GridPtr g = box(fixed.r_max, fixed.spacing);
  auto binding = [&](double depth) {
    const auto V = Interaction::gaussian_well(depth, width);
    return -radial_eigensolve(potential_on(g, V), 1.0, 0, g, 1, 1.0)[0].energy;
  };
  double lo = 0.0, hi = 1.0;
  while (binding(hi) < target_E0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6)
      throw ConvergenceError("tune_gaussian_well: depth diverged", hi);
  }
  const auto root = find_root_scalar(
      [&](double d) { return binding(d) - target_E0; }, lo, hi, 1e-13);
  return Interaction::gaussian_well(root.root, width);
}

TwoBodySolution solve_two_body(const Interaction &V, const TwoBodyOptions &opt,
                               Diagnostics *diag) {
  auto sol = solve_ground_state(V, opt.grid, diag);
  const auto &g = sol.alpha0.grid_ptr();
  sol.alpha0_hat = radial_fourier(sol.alpha0, g->dual(), diag);
  sol.decay = fit_decay_rate(sol.alpha0, diag);
  sol.moments = compute_moments(sol, opt.beta);
  try {
    sol.gap = compute_spectral_gap(sol, opt.epsilon, opt.l_max, diag);
  } catch (const GapViolated &) {
    if (opt.require_gap)
      throw;
    warn(diag, "two-body: spectral gap assumption violated");
  }
  return sol;
}

TwoBodySolution synthetic_two_body(const RadialFunction &alpha0, double E0,
                                   Diagnostics *diag) {
  TwoBodySolution sol;
  sol.V = Interaction::gaussian_well(0.0);
  sol.E0 = E0;
  sol.alpha0 = alpha0;
  sol.kinetic_alpha0 = shifted_kinetic(alpha0, E0);
  if (alpha0.grid().is_uniform())
    sol.alpha0_hat = radial_fourier(alpha0, alpha0.grid().dual(), diag);
  sol.residual = std::nan("");
  sol.synthetic = true;
  return sol;
}

} // namespace bcsgp::twobody
