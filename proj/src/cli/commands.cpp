#include "bcsgp/cli/commands.hpp"
#include "bcsgp/asymptotics/asymptotics.hpp"
#include "bcsgp/numerics/fourier.hpp"
#include "bcsgp/oracles/oracles.hpp"
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace bcsgp::cli {

using numerics::RadialFunction;
using numerics::RadialGrid;
using twobody::TwoBodySolution;
constexpr double pi = std::numbers::pi;

const std::vector<std::string> &subcommands() {
  static const std::vector<std::string> names{"twobody", "gp",   "trial-energy",
                                              "sweep",   "mu-c", "verify"};
  return names;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json est(const bcs::Estimate &e) { return {{"mean", e.mean}, {"stderr", e.stderr_}}; }

// ---------------------------------------------------------------- model setup

struct Model {
  Settings s;
  std::shared_ptr<const TwoBodySolution> sol;
  asymptotics::Study study;
};

std::shared_ptr<const TwoBodySolution> two_body(const Settings &s, Diagnostics *diag) {
  auto V = s.V;
  if (s.tune_depth)
    V = twobody::tune_gaussian_well(s.target_E0, V.range, s.twobody.grid);
  return std::make_shared<const TwoBodySolution>(twobody::solve_two_body(V, s.twobody, diag));
}

Model build_model(const json &cfg, Diagnostics *diag) {
  Model m;
  m.s = decode(cfg);
  m.sol = two_body(m.s, diag);
  m.study = asymptotics::make_study(m.sol, m.s.W, RadialGrid::build(m.s.trap_r_max, m.s.trap_n),
                                    diag);
  m.study.gp_options = m.s.gp;
  m.study.mc = m.s.mc;
  m.study.admissibility_delta = m.s.admissibility_delta;
  return m;
}

json two_body_json(const TwoBodySolution &sol, double g_bcs) {
  const auto &m = sol.moments;
  return {{"interaction", sol.V.describe()},
          {"depth", sol.V.depth},
          {"E0", sol.E0},
          {"residual", sol.residual},
          {"lowest_l1", sol.lowest_l1},
          {"grid", {{"r_max", sol.alpha0.grid().r_max()}, {"n", sol.alpha0.size()}}},
          {"gap",
           {{"gap", sol.gap.gap},
            {"epsilon", sol.gap.epsilon},
            {"worst_sector", sol.gap.worst_sector},
            {"per_sector", sol.gap.per_sector}}},
          {"decay",
           {{"rate", sol.decay.rate},
            {"window", {sol.decay.window_lo, sol.decay.window_hi}},
            {"nodes", sol.decay.window_nodes},
            {"rms", sol.decay.rms}}},
          {"moments",
           {{"sqrt_r_l2", m.sqrt_r_l2},
            {"r_l2", m.r_l2},
            {"r_beta_l2", m.r_beta_l2},
            {"l1", m.l1},
            {"V_l1", m.V_l1},
            {"hat_l2", m.hat_l2},
            {"hat_l4", m.hat_l4},
            {"hat_l6", m.hat_l6}}},
          {"g_bcs", g_bcs}};
}

json breakdown_json(const bcs::EnergyBreakdown &e) {
  const auto &q = e.quad;
  const auto &t = e.quartic;
  return {{"h", e.h},
          {"lambda", e.lambda},
          {"s1", e.s1},
          {"quadratic",
           {{"com_kinetic", q.com_kinetic},
            {"relative_residual", q.relative_residual},
            {"w_term", q.w_term},
            {"d_term", q.d_term},
            {"total", q.total}}},
          {"quartic",
           {{"kinetic", est(t.kinetic)},
            {"trap", est(t.trap)},
            {"plain", est(t.plain)},
            {"hbar", est(t.hbar)},
            {"samples", t.samples}}},
          {"total_bcs", est(e.total_bcs)},
          {"gp_reference", e.gp_reference},
          {"A0", e.A0},
          {"quartic_residual", est(e.quartic_residual)},
          {"reduction_slack", est(e.reduction_slack)}};
}

std::vector<std::string> energy_row(double h, const bcs::EnergyBreakdown *e, double E_gp,
                                    const bcs::Estimate *res, double D_c) {
  std::vector<std::string> r(8);
  r[0] = num(h);
  if (e) {
    r[1] = num(e->total_bcs.mean);
    r[5] = num(e->lambda);
    r[6] = num(e->s1);
  }
  if (std::isfinite(E_gp))
    r[2] = num(E_gp);
  if (res) {
    r[3] = num(res->mean);
    r[4] = num(res->stderr_);
  }
  if (std::isfinite(D_c))
    r[7] = num(D_c);
  return r;
}

// ---------------------------------------------------------------- subcommands

void cmd_twobody(const json &cfg, Outcome &out, Diagnostics &diag, std::ostream &log) {
  const auto s = decode(cfg);
  log << "solving the two-body problem\n";
  const auto sol = two_body(s, &diag);
  const double g = twobody::compute_g_bcs(sol->alpha0_hat, sol->E0, &diag);
  out.result["twobody"] = two_body_json(*sol, g);
  out.table.header = {"r", "alpha0", "kinetic_alpha0"};
  const double cut = 1e-12 * sol->alpha0.max_abs();
  for (std::size_t i = 0; i < sol->alpha0.size(); i += 10) {
    if (std::abs(sol->alpha0[i]) < cut)
      break;
    out.table.rows.push_back({num(sol->alpha0.grid().r(i)), num(sol->alpha0[i]),
                              num(sol->kinetic_alpha0[i])});
  }
}

void cmd_gp(const json &cfg, Outcome &out, Diagnostics &diag, std::ostream &log) {
  const auto s = decode(cfg);
  const auto sol = two_body(s, &diag);
  const double g = twobody::compute_g_bcs(sol->alpha0_hat, sol->E0, &diag);
  const auto grid = RadialGrid::build(s.trap_r_max, s.trap_n);
  const auto trap = gp::solve_trap_ground(s.W, grid);
  const double p4 = gp::field_norms(trap.psi_W, s.W).l4_4;
  out.result["g_bcs"] = g;
  out.result["E_W"] = trap.E_W;
  out.result["trap_residual"] = trap.residual;
  out.table.header = {"D", "offset", "E_gp", "l2_norm_sq", "trial_bound", "converged"};

  bool all_converged = true;
  json scan = json::array();
  auto solve = [&](double offset) {
    const double D = trap.E_W + offset;
    log << "minimizing the GP functional at D = " << D << "\n";
    auto r = gp::minimize_gp_unconstrained(s.W, D, g, grid, s.gp, nullptr, &diag);
    all_converged = all_converged && r.converged;
    const auto n = gp::field_norms(r.psi_star, s.W);
    const double bound = offset > 0.0 ? -offset * offset / (4.0 * g * p4) : 0.0;
    json e = {{"offset", offset},        {"D", D},
              {"energy", r.energy},      {"l2_norm_sq", n.l2_sq},
              {"converged", r.converged}, {"iterations", r.iterations},
              {"grad_residual", r.grad_residual}, {"trial_bound", bound}};
    out.table.rows.push_back({num(D), num(offset), num(r.energy), num(n.l2_sq), num(bound),
                              r.converged ? "true" : "false"});
    return std::make_pair(std::move(r), e);
  };

  auto [main_run, main_json] = solve(s.D_offset);
  if (main_run.converged && main_run.psi_star.max_abs() > 0.0) {
    const auto split = gp::gl_split(main_run, s.W, &diag);
    main_json["gl_split"] = {{"N", split.N},
                             {"mu0", split.mu0},
                             {"E_tilde", split.E_tilde},
                             {"E_gl", split.E_gl},
                             {"identity_residual", split.identity_residual}};
  }
  const auto ap = gp::apriori_bounds_check(main_run.psi_star, main_run.D, g, s.W);
  main_json["apriori"] = {{"lhs", ap.lhs},
                          {"energy", ap.energy},
                          {"ratio", std::isfinite(ap.ratio) ? json(ap.ratio) : json(nullptr)},
                          {"trivial_bound_holds", ap.trivial_bound_holds}};
  out.result["minimizer"] = main_json;
  for (double off : s.scan_offsets)
    scan.push_back(solve(off).second);
  out.result["criticality_scan"] = scan;
  if (!all_converged) {
    out.exit_code = exit_nonconvergence;
    out.error = {{"type", "convergence"}, {"message", "GP minimization did not converge"}};
  }
}

void cmd_trial_energy(const json &cfg, Outcome &out, Diagnostics &diag, std::ostream &log) {
  log << "setting up the model\n";
  const auto m = build_model(cfg, &diag);
  const double D = m.study.E_W + m.s.D_offset, h = m.s.h;
  out.result["E_W"] = m.study.E_W;
  out.result["g_bcs"] = m.study.g_bcs;
  out.result["D"] = D;
  log << "minimizing the GP functional\n";
  const auto r = gp::minimize_gp_unconstrained(m.s.W, D, m.study.g_bcs, m.study.trap_grid,
                                               m.s.gp, nullptr, &diag);
  if (!r.converged)
    throw ConvergenceError("GP minimization did not converge", r.grad_residual);
  const auto k = bcs::build_pair_kernel(r.psi_star, m.sol, h, &diag);
  log << "computing the spectrum of the pair kernel\n";
  const auto t = bcs::make_trial_state(k, m.s.admissibility_delta, std::nullopt, &diag);
  out.result["admissibility"] = {
      {"s1", t.s1}, {"lambda", t.lambda}, {"delta", t.delta}, {"margin", t.margin}};
  log << "Monte Carlo quartic traces (" << m.s.mc.samples << " samples)\n";
  const auto e = bcs::trial_bcs_energy(t, m.s.W, D, m.study.g_bcs, m.s.mc, &diag);
  out.result["energy"] = breakdown_json(e);
  const double E_gp = r.energy;
  const bcs::Estimate res{e.total_bcs.mean / h - E_gp, e.total_bcs.stderr_ / h};
  out.result["E_gp"] = E_gp;
  out.result["residual"] = est(res);
  if (!k.is_zero()) {
    const auto sch = bcs::schatten_norms(k, {2, 4, 6}, &diag);
    json v = json::array();
    for (const auto &x : sch.values)
      v.push_back({{"n", x.n}, {"value", x.value}, {"tail_bound", x.tail_bound}, {"ratio", x.ratio}});
    out.result["schatten"] = {{"values", v},
                              {"l_max", sch.l_max},
                              {"hs_exact", sch.hs_exact},
                              {"hs_computed", sch.hs_computed}};
    const auto d = bcs::decompose_alpha(k, &diag);
    out.result["decomposition"] = {{"alpha_norm_sq", d.alpha_norm_sq},
                                   {"psi_part_norm_sq", d.psi_part_norm_sq},
                                   {"remainder_norm_sq", d.remainder_norm_sq},
                                   {"orthogonality_defect", d.orthogonality_defect},
                                   {"pythagoras_residual", d.pythagoras_residual},
                                   {"psi_error", d.psi_error}};
  }
  out.table.header = energy_columns();
  out.table.rows.push_back(energy_row(h, &e, E_gp, &res, NAN));
}

void cmd_sweep(const json &cfg, Outcome &out, Diagnostics &diag, std::ostream &log) {
  log << "setting up the model\n";
  const auto m = build_model(cfg, &diag);
  const double D = m.study.E_W + m.s.D_offset;
  out.result["E_W"] = m.study.E_W;
  out.result["g_bcs"] = m.study.g_bcs;
  log << "sweeping h over " << m.s.sweep_h.size() << " values\n";
  const auto rec = asymptotics::h_sweep(m.study, D, m.s.sweep_h, std::nullopt, &diag);
  json pts = json::array();
  out.table.header = energy_columns();
  for (const auto &p : rec.points) {
    json j = {{"h", p.h}, {"valid", p.valid}};
    if (p.valid) {
      j["energy"] = breakdown_json(p.energy);
      j["residual"] = est(p.residual);
      j["quad_excess"] = p.quad_excess;
      out.table.rows.push_back(energy_row(p.h, &p.energy, rec.E_gp, &p.residual, NAN));
    } else {
      j["flag"] = p.flag;
      out.table.rows.push_back(energy_row(p.h, nullptr, rec.E_gp, nullptr, NAN));
    }
    pts.push_back(j);
  }
  auto fit_json = [](const std::optional<asymptotics::PowerLawFit> &f) -> json {
    if (!f)
      return nullptr;
    return {{"exponent", f->exponent}, {"prefactor", f->prefactor}, {"r2", f->r2},
            {"used", f->used},         {"excluded", f->excluded}};
  };
  out.result["sweep"] = {{"D", rec.D},
                         {"E_gp", rec.E_gp},
                         {"psi_source", rec.psi_is_minimizer ? "gp_minimizer" : "fixed"},
                         {"points", pts},
                         {"fit", fit_json(rec.fit)},
                         {"quadratic_fit", fit_json(rec.quad_fit)},
                         {"monotone", rec.monotone},
                         {"lower_constant", rec.lower_constant}};
  if (!rec.fit) {
    out.exit_code = exit_nonconvergence;
    out.error = {{"type", "fit"}, {"message", rec.fit_error}};
  }
}

void cmd_mu_c(const json &cfg, Outcome &out, Diagnostics &diag, std::ostream &log) {
  log << "setting up the model\n";
  const auto m = build_model(cfg, &diag);
  out.result["E_W"] = m.study.E_W;
  out.result["E0"] = m.sol->E0;
  out.result["label"] = "trial-family critical offset";
  out.result["points"] = json::array();
  out.table.header = energy_columns();
  asymptotics::CriticalOptions opt;
  opt.width = m.s.bracket_width;
  for (double h : m.s.mu_c_h) {
    log << "bisection for the critical offset at h = " << h << "\n";
    const auto cp = asymptotics::estimate_mu_c(m.study, h, m.study.E_W + m.s.bracket_lo,
                                               m.study.E_W + m.s.bracket_hi, opt, &diag);
    json ev = json::array();
    for (const auto &e : cp.evaluations)
      ev.push_back({{"D", e.D}, {"energy", est(e.energy)}, {"lambda", e.lambda},
                    {"s1", e.s1}, {"normal", e.normal}});
    out.result["points"].push_back({{"h", cp.h},
                                    {"D_c", cp.D_c},
                                    {"bracket", {cp.lo, cp.hi}},
                                    {"f_lo", est(cp.f_lo)},
                                    {"f_hi", est(cp.f_hi)},
                                    {"slope", cp.slope},
                                    {"uncertainty", cp.uncertainty},
                                    {"gap", cp.gap},
                                    {"mu_c", cp.mu_c},
                                    {"evaluations", ev}});
    const asymptotics::Evaluation *at_hi = nullptr;
    for (const auto &e : cp.evaluations)
      if (e.D == cp.hi)
        at_hi = &e;
    auto row = energy_row(h, nullptr, NAN, nullptr, cp.D_c);
    row[1] = num(cp.f_hi.mean);
    if (at_hi) {
      row[5] = num(at_hi->lambda);
      row[6] = num(at_hi->s1);
    }
    out.table.rows.push_back(row);
  }
  bool decreasing = true;
  const auto &p = out.result["points"];
  for (std::size_t i = 1; i < p.size(); ++i)
    decreasing = decreasing && p[i]["gap"].get<double>() < p[i - 1]["gap"].get<double>();
  out.result["gap_decreasing"] = decreasing;
}

// ---------------------------------------------------------------- verify

struct Checks {
  json list = json::array();
  bool all = true;
  void add(const std::string &name, bool pass, double value, double tol,
           const std::string &detail = "") {
    list.push_back({{"name", name}, {"passed", pass}, {"value", value}, {"tolerance", tol},
                    {"detail", detail}});
    all = all && pass;
  }
};

RadialFunction random_field(const numerics::GridPtr &g, std::mt19937_64 &rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.5, 2.0);
  double c[4], w[4];
  for (int k = 0; k < 4; ++k) {
    c[k] = nd(rng);
    w[k] = ud(rng);
  }
  return RadialFunction::sample(g, [&](double r) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k)
      s += c[k] * std::pow(r, 2 * k) * std::exp(-w[k] * r * r);
    return s;
  });
}

struct GaussianTrial {
  oracles::GaussianCase c;
  bcs::PairKernel k;
};

GaussianTrial gaussian_trial(double h, double D, double amp = 1.0) {
  oracles::GaussianCase c;
  c.h = h;
  c.D = D;
  c = c.normalized();
  c.A *= amp;
  auto gx = RadialGrid::build(8.0, 4000);
  auto gr = RadialGrid::build(20.0, 4000);
  auto psi = RadialFunction::sample(gx, [&](double r) { return c.A * std::exp(-c.a * r * r); });
  auto a0 = RadialFunction::sample(gr, [&](double r) { return c.B * std::exp(-c.b * r * r); });
  auto sol = std::make_shared<const TwoBodySolution>(twobody::synthetic_two_body(a0, c.E0));
  return {c, bcs::build_pair_kernel(psi, sol, h)};
}

} // namespace

std::vector<CheckResult> identity_checks() {
  const auto W1 = numerics::Trap::harmonic();
  std::vector<CheckResult> out;
  struct {
    std::vector<CheckResult> &v;
    void add(const std::string &n, bool p, double val, double tol, const std::string &d = "") {
      v.push_back({n, p, val, tol, d});
    }
  } ck{out};
  {
    const auto t = gaussian_trial(0.3, 0.0);
    const double exact = t.k.hs_norm_sq();
    const double quad = bcs::hs_norm_sq_by_quadrature(t.k, 7.0);
    const double rel = std::abs(quad / exact - 1.0);
    ck.add("hs_identity", rel <= 1e-8, rel, 1e-8);

    auto k = t.k;
    const auto &a0 = k.alpha0();
    const double m2 = 3.0 / (4.0 * t.c.b);
    auto chi = RadialFunction::sample(k.psi.grid_ptr(), [](double r) { return std::exp(-2 * r * r); });
    auto rho = RadialFunction::sample(a0.grid_ptr(), [&](double r) { return (r * r - m2) * a0(r); });
    k.remainder = bcs::Remainder{chi, rho};
    const auto d = bcs::decompose_alpha(k);
    ck.add("decomposition_roundtrip", d.psi_error <= 1e-10, d.psi_error, 1e-10);
    ck.add("decomposition_pythagoras", d.pythagoras_residual <= 1e-10, d.pythagoras_residual, 1e-10);
    ck.add("decomposition_orthogonality", d.orthogonality_defect <= 1e-10,
           d.orthogonality_defect, 1e-10);
  }
  {
    const double s1 = 0.1, h = 0.3, delta = 1e-9;
    const double lam = bcs::admissibility_lambda(s1, h, delta);
    const double p = bcs::admissibility_polynomial(lam, h, s1);
    const double p2 = bcs::admissibility_polynomial(0.5 * lam, h, s1);
    ck.add("admissibility_chosen_lambda", p >= delta, p, delta);
    ck.add("admissibility_fails_at_half", p2 < delta, p2, delta);
  }
  {
    const auto g = RadialGrid::build(8.0, 4000);
    std::mt19937_64 rng(11);
    const auto psi = random_field(g, rng);
    const double D = 2.0, gb = 5.0;
    const auto G = gp::gp_gradient(psi, W1, D, gb);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto phi = random_field(g, rng);
      auto add = [&](double st) {
        std::vector<double> v(psi.size());
        for (std::size_t i = 0; i < v.size(); ++i)
          v[i] = psi[i] + st * phi[i];
        return RadialFunction(g, std::move(v));
      };
      const double step = 1e-5;
      const double fd = (gp::gp_energy(add(step), W1, D, gb) - gp::gp_energy(add(-step), W1, D, gb)) /
                        (2 * step);
      const double an = 2.0 * G.inner(phi);
      worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
    ck.add("gp_gradient_central_differences", worst <= 1e-6, worst, 1e-6);

    const auto n = gp::field_norms(psi, W1);
    const double Q = 0.25 * n.grad_sq + n.trap - D * n.l2_sq;
    double qs = 0.0;
    for (double tt : {0.3, 1.0, 4.0}) {
      const double e = gp::gp_energy(psi.scaled(std::sqrt(tt)), W1, D, gb);
      qs = std::max(qs, std::abs(e - (tt * Q + tt * tt * gb * n.l4_4)) / (1.0 + std::abs(e)));
    }
    ck.add("gp_quartic_scaling", qs <= 1e-10, qs, 1e-10);
  }
  {
    auto g = RadialGrid::build(20.0, 4000);
    std::mt19937_64 rng(7);
    const auto f = random_field(g, rng);
    const auto fh = numerics::radial_fourier(f, g->dual());
    const double rel = std::abs(fh.norm2() / f.norm2() - 1.0);
    ck.add("fourier_unitarity", rel <= 1e-8, rel, 1e-8);
  }

  return out;
}

namespace {

void cmd_verify(const json &cfg, Outcome &out, Diagnostics &diag, std::ostream &log) {
  using oracles::GaussianOracle;
  const auto s = decode(cfg);
  Checks ck;
  const auto W1 = numerics::Trap::harmonic();

  log << "verify: oracles\n";
  {
    const auto t = gp::solve_trap_ground(W1, gp::default_trap_grid());
    ck.add("trap_ground_energy", std::abs(t.E_W - 1.5) <= 1e-6, t.E_W - 1.5, 1e-6);
    const auto ref = RadialFunction::sample(t.psi_W.grid_ptr(), [](double r) {
      return std::exp(-r * r);
    });
    const double ov = std::abs(t.psi_W.inner(ref)) / (t.psi_W.norm2() * ref.norm2());
    ck.add("trap_ground_overlap", ov >= 1.0 - 1e-8, 1.0 - ov, 1e-8);
  }
  {
    const auto sol = twobody::solve_ground_state(numerics::Interaction::spherical_well(4.0, 1.0));
    const double ref = *oracles::square_well_oracle(4.0, 1.0);
    ck.add("square_well_E0", std::abs(sol.E0 - ref) <= 1e-6, sol.E0 - ref, 1e-6);
    bool none = false;
    try {
      twobody::solve_ground_state(numerics::Interaction::spherical_well(2.4, 1.0));
    } catch (const twobody::NoBoundState &) {
      none = true;
    }
    bool some = true;
    try {
      twobody::solve_ground_state(numerics::Interaction::spherical_well(2.6, 1.0));
    } catch (const twobody::NoBoundState &) {
      some = false;
    }
    ck.add("square_well_threshold", none && some, 0.0, 0.0, "V0 = 2.4 unbound, 2.6 bound");
  }
  {
    auto g = RadialGrid::build(20.0, 4000);
    const double c = std::pow(pi, -0.75);
    auto a0 = RadialFunction::sample(g, [&](double r) { return c * std::exp(-r * r / 2); });
    const auto sol = twobody::synthetic_two_body(a0, 0.5);
    const double gb = twobody::compute_g_bcs(sol.alpha0_hat, 0.5);
    const double ref = 8.0 * std::pow(pi / 2.0, 1.5) * 1.25;
    ck.add("g_bcs_gaussian", std::abs(gb - ref) <= 1e-3, gb - ref, 1e-3);
  }

  log << "verify: identities\n";
  for (const auto &c : identity_checks())
    ck.add(c.name, c.passed, c.value, c.tolerance, c.detail);

  log << "verify: trial-state structure\n";
  {
    const auto t = gaussian_trial(0.3, 0.0);
    const auto q = bcs::quadratic_energy(t.k, W1, 0.0);
    const double ref = GaussianOracle::w_term(t.c);
    const double rel = std::abs(q.w_term / ref - 1.0);
    ck.add("w_term_closed_form", rel <= 1e-6, rel, 1e-6);
  }
  {
    const auto sol = two_body(s, &diag);
    const auto grid = gp::default_trap_grid();
    const double g = twobody::compute_g_bcs(sol->alpha0_hat, sol->E0, &diag);
    const double E_W = gp::solve_trap_ground(W1, grid).E_W;
    const auto r = gp::minimize_gp_unconstrained(W1, E_W + 0.5, g, grid, s.gp, nullptr, &diag);
    const auto k = bcs::build_pair_kernel(r.psi_star, sol, 0.3, &diag);
    const auto q = bcs::quadratic_energy(k, W1, E_W + 0.5);
    const double scale = r.psi_star.norm2() * r.psi_star.norm2() / 0.3;
    ck.add("relative_sector_residual", std::abs(q.relative_residual) <= 1e-6 * scale,
           q.relative_residual / scale, 1e-6);
    const auto split = gp::gl_split(r, W1, &diag);
    ck.add("gl_identity", split.identity_residual <= 1e-6, split.identity_residual, 1e-6);

    const auto below = gp::minimize_gp_unconstrained(W1, E_W - 0.1, g, grid, s.gp, nullptr, &diag);
    ck.add("gp_normal_phase", below.energy == 0.0 && below.psi_star.norm2() <= 1e-4,
           below.psi_star.norm2(), 1e-4);
  }

  log << "verify: quartic Monte Carlo (" << s.verify_samples << " samples)\n";
  {
    const auto t = gaussian_trial(0.4, 0.5);
    const auto ref = GaussianOracle::quartic(t.c);
    bcs::MCOptions mc = s.mc;
    mc.samples = s.verify_samples;
    const auto q = bcs::quartic_trace_mc(t.k, W1, t.c.D, mc, &diag);
    const double z = std::abs(q.hbar.mean - ref.hbar) / q.hbar.stderr_;
    ck.add("quartic_mc_gaussian", z <= 3.0, z, 3.0, "deviation in standard errors");
  }

  out.result["checks"] = ck.list;
  out.result["all_passed"] = ck.all;
  out.table.header = {"check", "passed", "value", "tolerance"};
  for (const auto &c : ck.list)
    out.table.rows.push_back({c["name"].get<std::string>(), c["passed"].get<bool>() ? "true" : "false",
                              num(c["value"].get<double>()), num(c["tolerance"].get<double>())});
  if (!ck.all) {
    out.exit_code = exit_validation;
    out.error = {{"type", "verification"}, {"message", "one or more checks failed"}};
  }
}

} // namespace

Outcome run_subcommand(const std::string &name, const json &cfg, std::ostream &log) {
  Outcome out;
  Diagnostics diag;
  auto fail = [&](int code, const char *type, const std::string &msg) {
    out.exit_code = code;
    out.error = {{"type", type}, {"message", msg}};
    log << "error: " << msg << "\n";
  };
  try {
    if (name == "twobody")
      cmd_twobody(cfg, out, diag, log);
    else if (name == "gp")
      cmd_gp(cfg, out, diag, log);
    else if (name == "trial-energy")
      cmd_trial_energy(cfg, out, diag, log);
    else if (name == "sweep")
      cmd_sweep(cfg, out, diag, log);
    else if (name == "mu-c")
      cmd_mu_c(cfg, out, diag, log);
    else if (name == "verify")
      cmd_verify(cfg, out, diag, log);
    else
      throw ConfigError("unknown subcommand '" + name + "'");
  } catch (const ConfigError &e) {
    fail(exit_validation, "config", e.what());
  } catch (const bcs::Inadmissible &e) {
    fail(exit_validation, "inadmissible", e.what());
  } catch (const asymptotics::NoSignChange &e) {
    fail(exit_validation, "no_sign_change", e.what());
  } catch (const DomainError &e) {
    fail(exit_validation, "domain", e.what());
  } catch (const ConvergenceError &e) {
    fail(exit_nonconvergence, "convergence", e.what());
  } catch (const std::exception &e) {
    fail(exit_nonconvergence, "numerical", e.what());
  }
  out.warnings = diag.warnings;
  return out;
}

} // namespace bcsgp::cli
