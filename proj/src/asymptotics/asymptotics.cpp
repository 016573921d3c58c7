#include "bcsgp/asymptotics/asymptotics.hpp"
#include <algorithm>
#include <cmath>
#include <sstream>

namespace bcsgp::asymptotics {

Study make_study(std::shared_ptr<const twobody::TwoBodySolution> sol, const Trap &W,
                 numerics::GridPtr trap_grid, Diagnostics *diag) {
  Study s;
  s.g_bcs = twobody::compute_g_bcs(sol->alpha0_hat, sol->E0, diag);
  s.sol = std::move(sol);
  s.W = W;
  s.trap_grid = std::move(trap_grid);
  s.E_W = gp::solve_trap_ground(W, s.trap_grid).E_W;
  return s;
}

PowerLawFit fit_power_law(const std::vector<FitPoint> &points) {
  std::vector<std::pair<double, double>> xy;
  PowerLawFit f;
  for (const auto &p : points) {
    if (!(p.x > 0.0))
      throw ConfigError("power-law fit: abscissae must be positive");
    if (std::abs(p.value) < 3.0 * p.stderr_ || p.value == 0.0) {
      ++f.excluded;
      continue;
    }
    xy.emplace_back(std::log(p.x), std::log(std::abs(p.value)));
  }
  f.used = xy.size();
  if (xy.size() < 4) {
    std::ostringstream os;
    os << "power-law fit: " << xy.size() << " significant points, need 4";
    throw FitError(os.str());
  }
  const double n = static_cast<double>(xy.size());
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : xy) {
    mx += x / n;
    my += y / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0)
    throw FitError("power-law fit: all abscissae coincide");
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  double ss_res = 0.0;
  for (auto [x, y] : xy) {
    const double r = y - (my + f.exponent * (x - mx));
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

namespace {
void check_h_list(const std::vector<double> &hs) {
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0 && hs[i] < 1.0))
      throw ConfigError("h values must lie in (0, 1)");
    if (i > 0 && !(hs[i] < hs[i - 1]))
      throw ConfigError("h values must be strictly decreasing");
  }
}

RadialFunction minimizer(const Study &s, double D, Diagnostics *diag) {
  auto r = gp::minimize_gp_unconstrained(s.W, D, s.g_bcs, s.trap_grid, s.gp_options,
                                         nullptr, diag);
  if (!r.converged)
    throw ConvergenceError("GP minimization did not converge", r.grad_residual);
  return r.psi_star;
}
} // namespace

SweepRecord h_sweep(const Study &s, double D, const std::vector<double> &h_list,
                    const std::optional<RadialFunction> &fixed_psi, Diagnostics *diag) {
  check_h_list(h_list);
  SweepRecord rec;
  rec.D = D;
  rec.h_values = h_list;
  rec.psi_is_minimizer = !fixed_psi;
  const RadialFunction psi = fixed_psi ? *fixed_psi : minimizer(s, D, diag);
  rec.norms = gp::field_norms(psi, s.W);
  rec.E_gp = gp::gp_energy(psi, s.W, D, s.g_bcs);
  const double gp_quad = 0.25 * rec.norms.grad_sq + rec.norms.trap - D * rec.norms.l2_sq;

  for (std::size_t i = 0; i < h_list.size(); ++i) {
    SweepPoint p;
    p.h = h_list[i];
    const auto k = bcs::build_pair_kernel(psi, s.sol, p.h, diag);
    try {
      const auto t = bcs::make_trial_state(k, s.admissibility_delta, std::nullopt, diag);
      auto mc = s.mc;
      mc.seed = s.mc.seed ^ static_cast<std::uint64_t>(i);
      p.energy = bcs::trial_bcs_energy(t, s.W, D, s.g_bcs, mc, diag);
      p.valid = true;
      p.residual.mean = p.energy.total_bcs.mean / p.h - rec.E_gp;
      p.residual.stderr_ = p.energy.total_bcs.stderr_ / p.h;
      p.quad_excess = p.energy.quad.total - p.h * gp_quad;
    } catch (const bcs::Inadmissible &e) {
      p.flag = e.what();
      warn(diag, "sweep: h = " + std::to_string(p.h) + " dropped: " + e.what());
    }
    rec.points.push_back(std::move(p));
  }

  std::vector<FitPoint> pts, quad;
  rec.monotone = true;
  double prev = INFINITY;
  for (const auto &p : rec.points) {
    if (!p.valid)
      continue;
    pts.push_back({p.h, p.residual.mean, p.residual.stderr_});
    quad.push_back({p.h, p.quad_excess, 0.0});
    const double mag = std::abs(p.residual.mean);
    if (!(mag < prev))
      rec.monotone = false;
    prev = mag;
    rec.lower_constant = std::max(rec.lower_constant, -p.residual.mean / p.h);
  }
  try {
    rec.fit = fit_power_law(pts);
  } catch (const FitError &e) {
    rec.fit_error = e.what();
  }
  try {
    rec.quad_fit = fit_power_law(quad);
  } catch (const FitError &) {
  }
  return rec;
}

Evaluation trial_energy_at(const Study &s, double h, double D, Diagnostics *diag) {
  Evaluation ev{D, {}, 0.0, 0.0, true};
  const auto psi = minimizer(s, D, diag);
  if (psi.max_abs() == 0.0)
    return ev;
  ev.normal = false;
  const auto k = bcs::build_pair_kernel(psi, s.sol, h, diag);
  const auto t = bcs::make_trial_state(k, s.admissibility_delta, std::nullopt, diag);
  ev.lambda = t.lambda;
  ev.s1 = t.s1;
  ev.energy = bcs::trial_bcs_energy(t, s.W, D, s.g_bcs, s.mc, diag).total_bcs;
  return ev;
}

CriticalPoint estimate_mu_c(const Study &s, double h, double D_lo, double D_hi,
                            const CriticalOptions &opt, Diagnostics *diag) {
  if (!(h > 0.0 && h < 1.0))
    throw ConfigError("critical offset: h must lie in (0, 1)");
  if (!(D_lo < D_hi))
    throw ConfigError("critical offset: bracket must satisfy D_lo < D_hi");
  CriticalPoint cp;
  cp.h = h;
  cp.E_W = s.E_W;
  auto eval = [&](double D) {
    cp.evaluations.push_back(trial_energy_at(s, h, D, diag));
    return cp.evaluations.back();
  };
  auto lo = eval(D_lo), hi = eval(D_hi);
  if (lo.energy.mean < 0.0 || hi.energy.mean >= 0.0) {
    std::ostringstream os;
    os << "no sign change of the trial energy on [" << D_lo << ", " << D_hi << "] (f = "
       << lo.energy.mean << ", " << hi.energy.mean << "); ";
    if (lo.energy.mean < 0.0)
      os << "lower the left end";
    else
      os << "raise the right end";
    throw NoSignChange(os.str());
  }
  while (hi.D - lo.D > opt.width) {
    if (static_cast<int>(cp.evaluations.size()) >= opt.max_evaluations)
      throw ConvergenceError("critical offset: evaluation budget exhausted", hi.D - lo.D);
    const auto mid = eval(0.5 * (lo.D + hi.D));
    (mid.energy.mean < 0.0 ? hi : lo) = mid;
  }
  cp.lo = lo.D;
  cp.hi = hi.D;
  cp.f_lo = lo.energy;
  cp.f_hi = hi.energy;
  cp.D_c = 0.5 * (lo.D + hi.D);

  const double a = std::max(D_lo, cp.D_c - opt.slope_step);
  const double b = std::min(D_hi, cp.D_c + opt.slope_step);
  const auto ea = eval(a), eb = eval(b);
  cp.slope = (eb.energy.mean - ea.energy.mean) / (b - a);
  const double sigma = std::max({lo.energy.stderr_, hi.energy.stderr_, 0.0});
  cp.uncertainty = 0.5 * (cp.hi - cp.lo) +
                   (cp.slope != 0.0 ? 3.0 * sigma / std::abs(cp.slope) : INFINITY);
  cp.gap = std::abs(cp.D_c - s.E_W);
  cp.mu_c = -s.sol->E0 + cp.D_c * h * h;
  return cp;
}

} // namespace bcsgp::asymptotics
