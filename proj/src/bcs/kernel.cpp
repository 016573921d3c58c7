#include "bcsgp/bcs/bcs.hpp"
#include "bcsgp/numerics/grid.hpp"
#include "bcsgp/numerics/roots.hpp"
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bcsgp::bcs {

using namespace numerics;

namespace {
constexpr double pi = std::numbers::pi;

double norm3(const Vec3 &v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Radius beyond which |f| stays below rel * max|f|.
double support_radius(const RadialFunction &f, double rel) {
  const double cut = rel * f.max_abs();
  std::size_t last = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > cut)
      last = i;
  return std::min(f.grid().r_max(), f.grid().r(std::min(last + 1, f.size() - 1)));
}
} // namespace

double PairKernel::hs_norm_sq() const {
  const double p = psi.norm2(), a = alpha0().norm2();
  return p * p * a * a / h;
}

double PairKernel::operator()(const Vec3 &x, const Vec3 &y) const {
  Vec3 eta, xi;
  for (int k = 0; k < 3; ++k) {
    eta[k] = 0.5 * (x[k] + y[k]);
    xi[k] = x[k] - y[k];
  }
  const double e = norm3(eta), q = norm3(xi) / h;
  double v = psi(e) * alpha0()(q) / (h * h);
  if (remainder)
    v += remainder->chi(e) * remainder->rho(q);
  return v;
}

PairKernel build_pair_kernel(const RadialFunction &psi,
                             std::shared_ptr<const TwoBodySolution> sol, double h,
                             Diagnostics *diag) {
  if (!(h > 0.0 && h < 1.0))
    throw ConfigError("pair kernel: h must lie in (0, 1)");
  if (!sol || sol->alpha0.empty())
    throw ConfigError("pair kernel: missing two-body solution");
  const auto &ag = sol->alpha0.grid();
  const double spacing = ag.is_uniform() ? ag.step() : ag.r(1) - ag.r(0);
  if (h < 4.0 * spacing)
    warn(diag, "pair kernel: h below four relative-grid spacings, alpha0(./h) is "
               "not resolved");
  PairKernel k;
  k.psi = psi;
  k.sol = std::move(sol);
  k.h = h;
  return k;
}

KernelDiscretization default_discretization(const PairKernel &k) {
  KernelDiscretization d;
  const double rpsi = support_radius(k.psi, 1e-12);
  const double ralpha = support_radius(k.alpha0(), 1e-10);
  d.rho_max = k.h * ralpha;
  d.r_max = rpsi + 0.5 * d.rho_max;
  d.r_panel = 0.5 * k.h;
  d.rho_panel = 0.5 * k.h;
  d.order = 8;
  return d;
}

// 8 pi^2 int int int r r' rho K^2 over |r - r'| < rho < r + r'.
double hs_norm_sq_by_quadrature(const PairKernel &k, double R) {
  const auto rr = composite_gauss_legendre(0.0, R, 48, 8);
  const GaussLegendre gl(24);
  const double rho_max = k.h * support_radius(k.alpha0(), 1e-10);
  double s = 0.0;
  for (std::size_t i = 0; i < rr.x.size(); ++i)
    for (std::size_t j = 0; j < rr.x.size(); ++j) {
      const double r = rr.x[i], rp = rr.x[j];
      const double lo = std::abs(r - rp), hi = std::min(r + rp, rho_max);
      if (lo >= hi)
        continue;
      const int panels = 4;
      const double wdt = (hi - lo) / panels;
      double inner = 0.0;
      for (int p = 0; p < panels; ++p)
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
          const double rho = lo + wdt * (p + 0.5 * (gl.x[q] + 1.0));
          const double c = (r * r + rp * rp - rho * rho) / (2.0 * r * rp);
          const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
          const double v = k({0.0, 0.0, r}, {rp * sn, 0.0, rp * c});
          inner += 0.5 * wdt * gl.w[q] * rho * v * v;
        }
      s += rr.w[i] * rr.w[j] * r * rp * inner;
    }
  return 8.0 * pi * pi * s;
}
std::vector<std::vector<double>>
radial_kernel_spectrum(const std::function<double(double, double, double)> &F,
                       const KernelDiscretization &disc, int l_max) {
  const auto panels = static_cast<std::size_t>(std::ceil(disc.r_max / disc.r_panel));
  const auto rule = composite_gauss_legendre(0.0, disc.r_max, panels,
                                             static_cast<std::size_t>(disc.order));
  const GaussLegendre gl(static_cast<std::size_t>(disc.order));
  const auto n = static_cast<Eigen::Index>(rule.x.size());
  const auto L = static_cast<std::size_t>(l_max);
  std::vector<Eigen::MatrixXd> mats(L + 1, Eigen::MatrixXd::Zero(n, n));
  std::vector<double> sw(rule.x.size());
  for (std::size_t i = 0; i < sw.size(); ++i)
    sw[i] = std::sqrt(rule.w[i]) * rule.x[i];

  std::vector<double> acc(L + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = rule.x[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i; j < n; ++j) {
      const double rp = rule.x[static_cast<std::size_t>(j)];
      const double lo = std::abs(r - rp), hi = std::min(r + rp, disc.rho_max);
      if (lo >= hi)
        continue;
      std::fill(acc.begin(), acc.end(), 0.0);
      // Enough panels for the rho spacing and for the oscillation of P_l.
      const double cmin = std::clamp((r * r + rp * rp - hi * hi) / (2.0 * r * rp), -1.0, 1.0);
      const double theta = std::acos(cmin);
      const auto np = static_cast<std::size_t>(
          std::max(std::ceil((hi - lo) / disc.rho_panel),
                   std::ceil(static_cast<double>(L + 1) * theta / pi)));
      const double width = (hi - lo) / static_cast<double>(np);
      for (std::size_t p = 0; p < np; ++p) {
        const double a = lo + width * static_cast<double>(p);
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
          const double rho = a + 0.5 * width * (gl.x[q] + 1.0);
          const double f = F(r, rp, rho) * rho * 0.5 * width * gl.w[q];
          if (f == 0.0)
            continue;
          const double c = std::clamp((r * r + rp * rp - rho * rho) / (2.0 * r * rp), -1.0, 1.0);
          double p0 = 1.0, p1 = c;
          acc[0] += f;
          if (L >= 1)
            acc[1] += f * c;
          for (std::size_t l = 2; l <= L; ++l) {
            const double p2 = ((2.0 * l - 1.0) * c * p1 - (l - 1.0) * p0) / static_cast<double>(l);
            acc[l] += f * p2;
            p0 = p1;
            p1 = p2;
          }
        }
      }
      const double pre = 2.0 * pi / (r * rp) * sw[static_cast<std::size_t>(i)] *
                         sw[static_cast<std::size_t>(j)];
      for (std::size_t l = 0; l <= L; ++l) {
        mats[l](i, j) = pre * acc[l];
        mats[l](j, i) = pre * acc[l];
      }
    }
  }
  std::vector<std::vector<double>> out;
  for (const auto &m : mats) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues();
    out.emplace_back(ev.data(), ev.data() + ev.size());
  }
  return out;
}

namespace {
std::function<double(double, double, double)> kernel_profile(const PairKernel &k) {
  return [&k](double r, double rp, double rho) {
    const double e2 = std::max(0.0, 2.0 * r * r + 2.0 * rp * rp - rho * rho);
    const double eta = 0.5 * std::sqrt(e2);
    double v = k.psi(eta) * k.alpha0()(rho / k.h) / (k.h * k.h);
    if (k.remainder)
      v += k.remainder->chi(eta) * k.remainder->rho(rho / k.h);
    return v;
  };
}

double max_abs(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}
} // namespace

double top_singular_value(const PairKernel &k, Diagnostics *diag) {
  if (k.is_zero() && !k.remainder)
    return 0.0;
  const auto spec = radial_kernel_spectrum(kernel_profile(k), default_discretization(k), 2);
  double s1 = 0.0;
  for (const auto &sector : spec)
    s1 = std::max(s1, max_abs(sector));
  (void)diag;
  return s1;
}

SchattenReport schatten_norms(const PairKernel &k, const std::vector<int> &ns,
                              Diagnostics *diag) {
  SchattenReport rep;
  rep.hs_exact = k.hs_norm_sq();
  rep.hs_computed = 0.0;
  rep.l_max = 0;
  std::vector<double> sums(ns.size(), 0.0);
  for (int n : ns)
    if (n < 2 || n % 2 != 0)
      throw ConfigError("Schatten norms: n must be even and >= 2");
  if (k.is_zero()) {
    for (int n : ns)
      rep.values.push_back({n, 0.0, 0.0, 0.0});
    return rep;
  }
  const auto disc = default_discretization(k);
  const auto F = kernel_profile(k);
  double s1 = 0.0, last_top = 0.0;
  constexpr int l_cap = 511;
  for (int L = 15;; L = 2 * L + 1) {
    const auto spec = radial_kernel_spectrum(F, disc, L);
    s1 = 0.0;
    for (const auto &ev : spec)
      s1 = std::max(s1, max_abs(ev));
    int l_end = L;
    for (int l = 2; l <= L; ++l)
      if (max_abs(spec[static_cast<std::size_t>(l)]) < 1e-4 * s1) {
        l_end = l;
        break;
      }
    if (l_end < L || L >= l_cap) {
      if (l_end == L)
        warn(diag, "Schatten norms: angular momentum cap reached");
      std::fill(sums.begin(), sums.end(), 0.0);
      for (int l = 0; l <= l_end; ++l) {
        const auto &ev = spec[static_cast<std::size_t>(l)];
        for (double s : ev) {
          rep.hs_computed += (2.0 * l + 1.0) * s * s;
          for (std::size_t q = 0; q < ns.size(); ++q)
            sums[q] += (2.0 * l + 1.0) * std::pow(std::abs(s), ns[q]);
        }
      }
      rep.l_max = l_end;
      last_top = max_abs(spec[static_cast<std::size_t>(l_end)]);
      break;
    }
  }
  const double missing = std::max(0.0, rep.hs_exact - rep.hs_computed);
  for (std::size_t q = 0; q < ns.size(); ++q) {
    const int n = ns[q];
    SchattenValue v;
    v.n = n;
    v.value = n == 2 ? rep.hs_exact : sums[q];
    v.tail_bound = n == 2 ? 0.0 : std::pow(last_top, n - 2) * missing;
    double scale = std::pow(k.h, n - 3) * std::pow(k.psi.norm(n), n);
    if (!k.sol->alpha0_hat.empty())
      scale *= std::pow(k.sol->alpha0_hat.norm(n), n);
    v.ratio = v.value / scale;
    rep.values.push_back(v);
  }
  return rep;
}

double admissibility_polynomial(double lambda, double h, double s1) {
  const double y = 1.0 + lambda * h, s2 = s1 * s1;
  return lambda * h - y * y * s2 * s2 - 2.0 * y * s2;
}

double admissibility_lambda(double s1, double h, double delta, double cap) {
  if (s1 == 0.0)
    return 0.0;
  const double s2 = s1 * s1;
  const double y_vertex = (1.0 - 2.0 * s2) / (2.0 * s2 * s2);
  const double lam_vertex = (y_vertex - 1.0) / h;
  const double hi = std::min(lam_vertex, cap);
  auto p = [&](double lam) { return admissibility_polynomial(lam, h, s1) - delta; };
  if (!(hi > 0.0) || p(hi) < 0.0) {
    std::ostringstream os;
    os << "no admissible lambda <= " << cap << " for s1 = " << s1 << ", h = " << h;
    throw Inadmissible(os.str());
  }
  const auto root = find_root_scalar(p, 0.0, hi, 1e-12 * std::max(1.0, hi));
  double lam = root.hi;
  for (int it = 0; it < 60 && p(lam) < 0.0; ++it)
    lam = std::nextafter(lam, hi);
  return lam;
}

TrialState make_trial_state(const PairKernel &k, double delta, std::optional<double> s1,
                            Diagnostics *diag) {
  TrialState t;
  t.kernel = k;
  t.delta = delta;
  t.s1 = s1 ? *s1 : top_singular_value(k, diag);
  t.lambda = admissibility_lambda(t.s1, k.h, delta);
  t.margin = admissibility_polynomial(t.lambda, k.h, t.s1);
  return t;
}

Decomposition decompose_alpha(const PairKernel &k, Diagnostics *diag) {
  // Separable terms c_j A_j(eta) B_j(xi/h).
  struct Term {
    double c;
    const RadialFunction *A;
    const RadialFunction *B;
  };
  std::vector<Term> terms{{1.0 / (k.h * k.h), &k.psi, &k.alpha0()}};
  if (k.remainder) {
    if (k.remainder->chi.grid_ptr() != k.psi.grid_ptr() ||
        k.remainder->rho.grid_ptr() != k.alpha0().grid_ptr())
      throw ConfigError("decomposition: remainder must share the grids of psi and alpha0");
    terms.push_back({1.0, &k.remainder->chi, &k.remainder->rho});
  }
  const auto &a0 = k.alpha0();
  const double a0n = a0.inner(a0);
  const double h3 = k.h * k.h * k.h;
  const std::size_t m = terms.size();

  std::vector<double> proj(m);
  std::vector<RadialFunction> Bperp;
  for (std::size_t j = 0; j < m; ++j) {
    proj[j] = a0.inner(*terms[j].B) / a0n;
    std::vector<double> v(a0.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = (*terms[j].B)[i] - proj[j] * a0[i];
    Bperp.emplace_back(a0.grid_ptr(), std::move(v));
  }

  Decomposition d{};
  std::vector<double> psi_rec(k.psi.size(), 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < psi_rec.size(); ++i)
      psi_rec[i] += terms[j].c * k.h * k.h * proj[j] * a0n * (*terms[j].A)[i];
  d.psi_recovered = RadialFunction(k.psi.grid_ptr(), psi_rec);

  d.alpha_norm_sq = 0.0;
  d.remainder_norm_sq = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t l = 0; l < m; ++l) {
      const double cc = terms[j].c * terms[l].c * terms[j].A->inner(*terms[l].A) * h3;
      d.alpha_norm_sq += cc * terms[j].B->inner(*terms[l].B);
      d.remainder_norm_sq += cc * Bperp[j].inner(Bperp[l]);
    }
  const double pn = d.psi_recovered.norm2();
  d.psi_part_norm_sq = pn * pn * a0n / k.h;
  d.pythagoras_residual =
      std::abs(d.alpha_norm_sq - d.psi_part_norm_sq - d.remainder_norm_sq) /
      std::max(d.alpha_norm_sq, 1e-300);

  d.orthogonality_defect = 0.0;
  std::vector<double> ip(m);
  for (std::size_t j = 0; j < m; ++j)
    ip[j] = terms[j].c * h3 * a0.inner(Bperp[j]);
  for (std::size_t i = 0; i < k.psi.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      s += ip[j] * (*terms[j].A)[i];
    d.orthogonality_defect = std::max(d.orthogonality_defect, std::abs(s));
  }
  d.input_defect = k.remainder ? a0.inner(k.remainder->rho) : 0.0;
  if (std::abs(d.input_defect) > 1e-10)
    warn(diag, "decomposition: remainder is not orthogonal to alpha0, defect " +
                   std::to_string(d.input_defect));
  std::vector<double> diff(psi_rec.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = psi_rec[i] - k.psi[i];
  const double pnorm = k.psi.norm2();
  d.psi_error = pnorm > 0.0 ? RadialFunction(k.psi.grid_ptr(), diff).norm2() / pnorm : 0.0;
  return d;
}

} // namespace bcsgp::bcs
