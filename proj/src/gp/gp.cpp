#include "bcsgp/gp/gp.hpp"
#include "bcsgp/numerics/eigensolver.hpp"
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bcsgp::gp {

using namespace numerics;

namespace {
constexpr double four_pi = 4.0 * std::numbers::pi;

std::vector<double> trap_on(const GridPtr &g, const Trap &W) {
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = W(g->r(i));
  return v;
}

// The GP functional on the unknowns u = r psi (nodes 0..n-2), with
// E = 4 pi [1/4 u^T K u + sum M (W - D) u^2 + g sum M u^4 / r^2].
struct Discrete {
  GridPtr grid;
  RadialOperator op;
  std::vector<double> W, r, M;

  Discrete(const GridPtr &g, const Trap &trap)
      : grid(g), op(g, 0.25, 0, trap_on(g, trap)) {
    const std::size_t m = op.unknowns();
    W.resize(m);
    r.resize(m);
    M.assign(op.mass().begin(), op.mass().end());
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = g->r(i);
      W[i] = trap(r[i]);
    }
  }
  std::size_t size() const { return M.size(); }

  std::vector<double> to_u(const RadialFunction &f) const {
    if (f.grid_ptr() != grid)
      throw ConfigError("GP: field lives on a different grid");
    return op.to_u(f);
  }

  // Functional with trap W - shift and quartic coefficient c.
  double energy(const std::vector<double> &u, double shift, double c) const {
    double s = 0.25 * op.stiffness_form(u);
    for (std::size_t i = 0; i < size(); ++i) {
      const double u2 = u[i] * u[i];
      s += M[i] * (W[i] - shift) * u2 + c * M[i] * u2 * u2 / (r[i] * r[i]);
    }
    return four_pi * s;
  }

  // r times the L^2 gradient field -1/4 Delta + (W - shift) + 2c psi^2.
  std::vector<double> field(const std::vector<double> &u, double shift, double c) const {
    auto k = op.stiffness_apply(u);
    for (std::size_t i = 0; i < size(); ++i)
      k[i] = 0.25 * k[i] / M[i] + (W[i] - shift) * u[i] +
             2.0 * c * u[i] * u[i] * u[i] / (r[i] * r[i]);
    return k;
  }

  double l2(const std::vector<double> &v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      s += M[i] * v[i] * v[i];
    return std::sqrt(four_pi * s);
  }

  double l4_4(const std::vector<double> &u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      s += M[i] * std::pow(u[i], 4) / (r[i] * r[i]);
    return four_pi * s;
  }

  // Tridiagonal 1/4 K + diag(M (W - shift) + 6 c M u^2 / r^2) + sigma M.
  void hessian(const std::vector<double> &u, double shift, double c, double sigma,
               std::vector<double> &d, std::vector<double> &e) const {
    const auto ie = op.inverse_edges();
    d.resize(size());
    e.resize(size() - 1);
    for (std::size_t i = 0; i < size(); ++i)
      d[i] = 0.25 * (ie[i] + ie[i + 1]) +
             M[i] * (W[i] - shift + sigma + 6.0 * c * u[i] * u[i] / (r[i] * r[i]));
    for (std::size_t i = 0; i + 1 < size(); ++i)
      e[i] = -0.25 * ie[i + 1];
  }

  RadialFunction from_u(const std::vector<double> &u) const { return op.from_u(u); }
};

double tail_ratio(const RadialFunction &f) {
  const std::size_t n = f.size();
  const std::size_t k = std::max<std::size_t>(n / 50, 4);
  double tail = 0.0;
  for (std::size_t i = n - k; i < n; ++i)
    tail = std::max(tail, std::abs(f[i]));
  const double mx = f.max_abs();
  return mx > 0.0 ? tail / mx : 0.0;
}

void require_decayed(const RadialFunction &psi) {
  if (tail_ratio(psi) > 1e-6)
    throw DomainError("GP: <psi|W|psi> is not resolved, the field does not decay "
                      "before r_max");
}
} // namespace

GridPtr default_trap_grid() { return RadialGrid::build(8.0, 8000); }

TrapGround solve_trap_ground(const Trap &W, const GridPtr &grid) {
  W.validate();
  const auto p = radial_eigensolve(trap_on(grid, W), 0.25, 0, grid, 1)[0];
  return {p.energy, p.f, p.residual};
}

FieldNorms field_norms(const RadialFunction &psi, const Trap &W) {
  const Discrete d(psi.grid_ptr(), W);
  const auto u = d.to_u(psi);
  FieldNorms n{};
  n.grad_sq = four_pi * d.op.stiffness_form(u);
  n.l4_4 = d.l4_4(u);
  double l2 = 0.0, tr = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    l2 += d.M[i] * u[i] * u[i];
    tr += d.M[i] * d.W[i] * u[i] * u[i];
  }
  n.l2_sq = four_pi * l2;
  n.trap = four_pi * tr;
  return n;
}

double gp_energy(const RadialFunction &psi, const Trap &W, double D, double g) {
  require_decayed(psi);
  const Discrete d(psi.grid_ptr(), W);
  return d.energy(d.to_u(psi), D, g);
}

RadialFunction gp_gradient(const RadialFunction &psi, const Trap &W, double D,
                           double g) {
  require_decayed(psi);
  const Discrete d(psi.grid_ptr(), W);
  return d.from_u(d.field(d.to_u(psi), D, g));
}

GPResult minimize_gp_unconstrained(const Trap &W, double D, double g_bcs,
                                   const GridPtr &grid, const GPOptions &opt,
                                   const RadialFunction *init, Diagnostics *diag) {
  if (!(g_bcs > 0.0))
    throw ConfigError("GP: g_BCS must be positive");
  W.validate();
  const Discrete d(grid, W);
  const auto trap = solve_trap_ground(W, grid);

  GPResult res;
  res.D = D;
  res.g_bcs = g_bcs;
  res.E_W = trap.E_W;
  res.psi_W = trap.psi_W;
  if (D <= trap.E_W) {
    res.psi_star = RadialFunction::zero(grid);
    res.converged = true;
    res.energy_history.push_back(0.0);
    return res;
  }

  std::vector<double> u;
  if (init) {
    u = d.to_u(init->grid_ptr() == grid ? *init : init->resampled(grid));
    for (double &x : u)
      x = std::abs(x);
  } else {
    u = d.to_u(trap.psi_W);
    const double t = (D - trap.E_W) / (2.0 * g_bcs * d.l4_4(u));
    for (double &x : u)
      x *= std::sqrt(t);
  }

  double E = d.energy(u, D, g_bcs);
  res.energy_history.push_back(E);
  std::vector<double> hd, he;
  int it = 0;
  bool done = false;
  for (; it < opt.max_iterations; ++it) {
    const auto G = d.field(u, D, g_bcs);
    const double gn = d.l2(G);
    const double norm = d.l2(u);
    res.grad_residual = gn;
    if (gn <= opt.grad_tol * std::max(1.0, norm)) {
      done = true;
      break;
    }
    const auto hsz = res.energy_history.size();
    if (hsz > static_cast<std::size_t>(opt.stagnation_window)) {
      const double old = res.energy_history[hsz - 1 - static_cast<std::size_t>(opt.stagnation_window)];
      if (std::abs(old - E) <= opt.stagnation_tol * std::max(1.0, std::abs(E))) {
        done = true;
        break;
      }
    }
    // Newton step on E(u)/(8 pi), shifted towards gradient flow when the
    // Hessian is indefinite.
    std::vector<double> step(d.size());
    double sigma = 0.0;
    for (;;) {
      d.hessian(u, D, g_bcs, sigma, hd, he);
      for (std::size_t i = 0; i < d.size(); ++i)
        step[i] = -d.M[i] * G[i];
      if (spd_tridiagonal_solve(hd, he, step))
        break;
      sigma = sigma == 0.0 ? 1e-3 : 10.0 * sigma;
      if (sigma > 1e12)
        throw ConvergenceError("GP: Hessian shift diverged", gn);
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
      slope += d.M[i] * G[i] * step[i];
    slope *= 2.0 * four_pi;
    double s = 1.0;
    std::vector<double> trial(d.size());
    double Et = E;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, s *= 0.5) {
      for (std::size_t i = 0; i < d.size(); ++i)
        trial[i] = std::abs(u[i] + s * step[i]);
      Et = d.energy(trial, D, g_bcs);
      if (Et <= E + 1e-4 * s * slope + 1e-14 * std::max(1.0, std::abs(E))) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Round-off level: no descent direction left.
      done = true;
      break;
    }
    u.swap(trial);
    E = std::min(Et, E);
    res.energy_history.push_back(Et);
  }
  res.iterations = it;
  res.converged = done;
  res.grad_residual = d.l2(d.field(u, D, g_bcs));
  if (res.grad_residual > opt.grad_tol * std::max(1.0, d.l2(u)) &&
      res.grad_residual > 1e-6 * std::max(1.0, d.l2(u)))
    res.converged = false;
  if (!res.converged) {
    std::ostringstream os;
    os << "GP: not converged after " << it << " iterations, gradient residual "
       << res.grad_residual;
    warn(diag, os.str());
  }
  res.psi_star = d.from_u(u);
  res.energy = d.energy(u, D, g_bcs);
  if (res.energy > 0.0) {
    warn(diag, "GP: iterate with positive energy replaced by psi = 0");
    res.psi_star = RadialFunction::zero(grid);
    res.energy = 0.0;
  }
  return res;
}

namespace {
struct ConstrainedState {
  std::vector<double> u;
  double mu;
};

// Bordered Newton on R = 1/4 K u + M (W - mu) u + 2 gN M u^3 / r^2 and
// C = (u^T M u - 1/(4 pi)) / 2.
std::optional<ConstrainedState> bordered_newton(const Discrete &d, double gN,
                                                ConstrainedState st, int &iters) {
  const std::size_t m = d.size();
  auto residuals = [&](const ConstrainedState &s, std::vector<double> &R, double &C) {
    R = d.field(s.u, s.mu, gN);
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      R[i] *= d.M[i];
      mass += d.M[i] * s.u[i] * s.u[i];
    }
    C = 0.5 * (mass - 1.0 / four_pi);
    double merit = C * C;
    for (std::size_t i = 0; i < m; ++i)
      merit += R[i] * R[i] / d.M[i];
    return merit;
  };
  std::vector<double> R, hd, he;
  double C;
  double merit = residuals(st, R, C);
  for (int it = 0; it < 100; ++it, ++iters) {
    if (merit < 1e-26)
      return st;
    d.hessian(st.u, st.mu, gN, 0.0, hd, he);
    std::vector<double> x1 = R, x2(m);
    for (std::size_t i = 0; i < m; ++i)
      x2[i] = d.M[i] * st.u[i];
    if (!spd_tridiagonal_solve(hd, he, x1) || !spd_tridiagonal_solve(hd, he, x2))
      return std::nullopt;
    double mx1 = 0.0, mx2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      mx1 += d.M[i] * st.u[i] * x1[i];
      mx2 += d.M[i] * st.u[i] * x2[i];
    }
    const double dmu = (mx1 - C) / mx2;
    double s = 1.0;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls, s *= 0.5) {
      ConstrainedState t = st;
      for (std::size_t i = 0; i < m; ++i)
        t.u[i] += s * (-x1[i] + x2[i] * dmu);
      t.mu += s * dmu;
      std::vector<double> Rt;
      double Ct;
      const double mt = residuals(t, Rt, Ct);
      if (mt < (1.0 - 1e-4 * s) * merit) {
        st = std::move(t);
        R = std::move(Rt);
        C = Ct;
        merit = mt;
        ok = true;
        break;
      }
    }
    if (!ok)
      return merit < 1e-20 ? std::optional(st) : std::nullopt;
  }
  return merit < 1e-20 ? std::optional(st) : std::nullopt;
}
} // namespace

ConstrainedResult minimize_gp_constrained(const Trap &W, double g_bcs, double N,
                                          const GridPtr &grid, Diagnostics *diag) {
  if (!(N > 0.0))
    throw ConfigError("constrained GP: N must be positive");
  if (!(g_bcs >= 0.0))
    throw ConfigError("constrained GP: g_BCS must be nonnegative");
  const Discrete d(grid, W);
  const double gN = g_bcs * N;
  const auto trap = solve_trap_ground(W, grid);
  ConstrainedState st{d.to_u(trap.psi_W), trap.E_W};
  int iters = 0;

  if (gN > 0.0) {
    auto start = [&](double c) {
      ConstrainedState s = st;
      s.mu = trap.E_W + 2.0 * c * d.l4_4(s.u);
      return s;
    };
    auto direct = bordered_newton(d, gN, start(gN), iters);
    if (direct) {
      st = *direct;
    } else {
      // Continuation in gN from the linear problem.
      double reached = 0.0;
      double step = gN / 8.0;
      while (reached < gN) {
        const double target = std::min(gN, reached + step);
        ConstrainedState s0 = st;
        if (reached == 0.0)
          s0 = start(target);
        auto next = bordered_newton(d, target, s0, iters);
        if (next) {
          st = *next;
          reached = target;
          step *= 2.0;
        } else {
          step *= 0.25;
          if (step < 1e-8 * gN)
            throw ConvergenceError("constrained GP: continuation in gN stalled",
                                   reached);
        }
      }
    }
  }
  for (double &x : st.u)
    x = std::abs(x);
  const double nrm = d.l2(st.u);
  for (double &x : st.u)
    x /= nrm;

  ConstrainedResult out;
  out.f0 = d.from_u(st.u);
  out.E_tilde = d.energy(st.u, 0.0, gN);
  out.mu0 = out.E_tilde + gN * d.l4_4(st.u);
  out.multiplier = st.mu;
  out.residual = d.l2(d.field(st.u, out.mu0, gN));
  out.iterations = iters;
  if (out.residual > 1e-7) {
    std::ostringstream os;
    os << "constrained GP: variational residual " << out.residual << " above 1e-7";
    warn(diag, os.str());
  }
  return out;
}

GLSplit gl_split(const GPResult &result, const Trap &W, Diagnostics *diag) {
  const auto &grid = result.psi_star.grid_ptr();
  const Discrete d(grid, W);
  const auto up = d.to_u(result.psi_star);
  GLSplit s;
  s.N = result.psi_star.norm2() * result.psi_star.norm2();
  if (!(s.N > 0.0))
    throw DomainError("GL split: requires a nontrivial minimizer (N > 0)");
  const auto c = minimize_gp_constrained(W, result.g_bcs, s.N, grid, diag);
  s.f0 = c.f0;
  s.mu0 = c.mu0;
  s.E_tilde = c.E_tilde;
  const auto a = d.to_u(c.f0);
  const double sqN = std::sqrt(s.N);
  const double scale = result.psi_star.max_abs() / sqN;
  std::vector<double> phi(d.size(), 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (c.f0[i] > 1e-12)
      phi[i] = up[i] / (sqN * a[i]);
    else if (std::abs(result.psi_star[i]) / sqN > 1e-10 * std::max(1.0, scale))
      throw DomainError("GL split: f0 underflows where psi* is not negligible");
  }
  const double gN = result.g_bcs * s.N;
  const auto ie = d.op.inverse_edges();
  double kin = 0.0, pot = 0.0;
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    kin += a[i] * a[i + 1] * std::pow(phi[i + 1] - phi[i], 2) * ie[i + 1];
  for (std::size_t i = 0; i < d.size(); ++i)
    pot += d.M[i] * std::pow(a[i], 4) / (d.r[i] * d.r[i]) *
           std::pow(1.0 - phi[i] * phi[i], 2);
  s.E_gl = four_pi * (0.25 * kin + gN * pot);
  std::vector<double> pf(grid->size(), 1.0);
  std::copy(phi.begin(), phi.end(), pf.begin());
  s.phi = RadialFunction(grid, std::move(pf));
  const double rhs = s.N * (s.E_tilde - result.D + s.E_gl);
  s.identity_residual =
      std::abs(result.energy - rhs) / std::max(1.0, std::abs(result.energy));
  return s;
}

AprioriReport apriori_bounds_check(const RadialFunction &psi, double D, double g_bcs,
                                   const Trap &W) {
  const auto n = field_norms(psi, W);
  AprioriReport r{};
  r.lhs = n.grad_sq + n.trap + n.l4_4 + n.l2_sq;
  r.energy = 0.25 * n.grad_sq + n.trap - D * n.l2_sq + g_bcs * n.l4_4;
  const double drive = std::max(r.energy, 0.0);
  r.ratio = drive > 0.0 ? r.lhs / drive
                        : (r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  if (D < 0.0) {
    r.trivial_constant = std::max({4.0, 1.0 / std::abs(D), 1.0 / g_bcs});
    r.trivial_bound_holds =
        r.lhs <= r.trivial_constant * r.energy * (1.0 + 1e-12) + 1e-300;
  } else {
    r.trivial_constant = std::nan("");
    r.trivial_bound_holds = true;
  }
  return r;
}

} // namespace bcsgp::gp
