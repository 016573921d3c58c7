#include "bcsgp/bcs/bcs.hpp"
#include "bcsgp/gp/gp.hpp"
#include "bcsgp/numerics/grid.hpp"
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace bcsgp::bcs {

using namespace numerics;

namespace {
constexpr double pi = std::numbers::pi;

double support_radius(const RadialFunction &f, double rel) {
  const double cut = rel * f.max_abs();
  std::size_t last = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > cut)
      last = i;
  return std::min(f.grid().r_max(), f.grid().r(std::min(last + 1, f.size() - 1)));
}

void require_trial_family(const PairKernel &k) {
  if (k.remainder)
    throw ConfigError("energy evaluation is defined for the trial family only "
                      "(kernel without remainder)");
}

// 3-D radial density proportional to f(|x|), piecewise constant on the grid
// cells [r_{i-1}, r_i] (r_{-1} = 0) and sampled uniformly in volume per cell.
class RadialSampler {
public:
  RadialSampler(const RadialGrid &g, std::vector<double> f, double floor_rel) {
    const std::size_t n = g.size();
    const double mx = *std::max_element(f.begin(), f.end());
    for (double &v : f)
      v = std::max(v, floor_rel * mx);
    m_edges.resize(n + 1);
    m_edges[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      m_edges[i + 1] = g.r(i);
    m_uniform = g.is_uniform();
    m_step = g.is_uniform() ? g.step() : 0.0;
    m_cdf.assign(n + 1, 0.0);
    m_level.resize(n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = m_edges[i], b = m_edges[i + 1];
      const double fa = i == 0 ? f[0] : f[i - 1];
      m_level[i] = 0.5 * (fa + f[i]);
      z += m_level[i] * 4.0 / 3.0 * pi * (b * b * b - a * a * a);
      m_cdf[i + 1] = z;
    }
    for (double &c : m_cdf)
      c /= z;
    for (double &l : m_level)
      l /= z;
  }

  double sample(std::mt19937_64 &rng) const {
    const double u = m_unit(rng);
    auto it = std::upper_bound(m_cdf.begin() + 1, m_cdf.end(), u);
    std::size_t i = static_cast<std::size_t>(it - m_cdf.begin()) - 1;
    if (i >= m_level.size())
      i = m_level.size() - 1;
    const double a = m_edges[i], b = m_edges[i + 1];
    const double v = m_unit(rng);
    return std::cbrt(a * a * a + v * (b * b * b - a * a * a));
  }

  double density(double r) const {
    if (r > m_edges.back())
      return 0.0;
    std::size_t i;
    if (m_uniform) {
      i = static_cast<std::size_t>(r / m_step);
      if (i >= m_level.size())
        i = m_level.size() - 1;
      while (i > 0 && r < m_edges[i])
        --i;
      while (i + 1 < m_level.size() && r > m_edges[i + 1])
        ++i;
    } else {
      auto it = std::upper_bound(m_edges.begin(), m_edges.end(), r);
      i = std::min<std::size_t>(static_cast<std::size_t>(it - m_edges.begin()), m_level.size()) - 1;
    }
    return m_level[i];
  }

private:
  std::vector<double> m_edges, m_cdf, m_level;
  bool m_uniform{false};
  double m_step{0.0};
  mutable std::uniform_real_distribution<double> m_unit{0.0, 1.0};
};

std::vector<double> abs_values(const RadialFunction &f) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::abs(f[i]);
  return v;
}

struct Moments4 {
  double s[4]{}, s2[4]{};
};
} // namespace

QuadraticTerms quadratic_energy(const PairKernel &k, const Trap &W, double D) {
  require_trial_family(k);
  QuadraticTerms q{};
  const double h = k.h;
  const auto n = gp::field_norms(k.psi, W);
  const auto &a0 = k.alpha0();
  const double a0n = a0.inner(a0);
  q.com_kinetic = 0.25 * h * n.grad_sq * a0n;
  q.relative_residual = n.l2_sq / h * twobody::relative_form(*k.sol);
  q.d_term = -h * D * n.l2_sq * a0n;

  // h int int psi^2(eta) alpha0^2(xi) W(|eta + h xi / 2|) d eta d xi.
  if (k.is_zero()) {
    q.w_term = 0.0;
  } else {
    const double re = support_radius(k.psi, 1e-12), rx = support_radius(a0, 1e-12);
    const auto ge = composite_gauss_legendre(0.0, re, 64, 8);
    const auto gx = composite_gauss_legendre(0.0, rx, 64, 8);
    const GaussLegendre gc(32);
    std::vector<double> fe(ge.x.size()), fx(gx.x.size());
    for (std::size_t i = 0; i < fe.size(); ++i)
      fe[i] = 4.0 * pi * ge.w[i] * ge.x[i] * ge.x[i] * std::pow(k.psi(ge.x[i]), 2);
    for (std::size_t j = 0; j < fx.size(); ++j)
      fx[j] = 4.0 * pi * gx.w[j] * gx.x[j] * gx.x[j] * std::pow(a0(gx.x[j]), 2);
    double s = 0.0;
    for (std::size_t i = 0; i < fe.size(); ++i) {
      const double e = ge.x[i];
      double row = 0.0;
      for (std::size_t j = 0; j < fx.size(); ++j) {
        const double rho = 0.5 * h * gx.x[j];
        double avg = 0.0;
        for (std::size_t c = 0; c < gc.x.size(); ++c)
          avg += gc.w[c] * W(std::sqrt(std::max(0.0, e * e + rho * rho + 2.0 * e * rho * gc.x[c])));
        row += fx[j] * 0.5 * avg;
      }
      s += fe[i] * row;
    }
    q.w_term = h * s;
  }
  q.total = q.com_kinetic + q.relative_residual + q.w_term + q.d_term;
  return q;
}

QuarticTraces quartic_trace_mc(const PairKernel &k, const Trap &W, double D,
                               const MCOptions &opt, Diagnostics *diag) {
  require_trial_family(k);
  if (opt.samples < 2)
    throw ConfigError("quartic MC: need at least two samples");
  if (opt.threads < 1)
    throw ConfigError("quartic MC: threads must be >= 1");
  QuarticTraces out;
  out.samples = opt.samples;
  if (k.is_zero())
    return out;

  const double h = k.h;
  const auto &psi = k.psi;
  const auto &a0 = k.alpha0();
  const auto &ka0 = k.sol->kinetic_alpha0;
  const auto lap_psi = radial_laplacian(psi);

  std::vector<double> psi4(psi.size());
  for (std::size_t i = 0; i < psi4.size(); ++i)
    psi4[i] = std::pow(psi[i], 4);
  const RadialSampler sx(psi.grid(), psi4, 1e-14);
  const RadialSampler s0(a0.grid(), abs_values(a0), 1e-14);
  const RadialSampler sk(ka0.grid(), abs_values(ka0), 1e-14);

  const std::uint64_t blocks = (opt.samples + opt.block - 1) / opt.block;
  std::vector<Moments4> results(blocks);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&]() {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks)
        break;
      std::seed_seq seq{static_cast<std::uint32_t>(opt.seed),
                        static_cast<std::uint32_t>(opt.seed >> 32),
                        static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
      std::mt19937_64 rng(seq);
      const std::uint64_t count = std::min(opt.block, opt.samples - b * opt.block);
      auto direction = [&](double r) {
        const double z = 2.0 * unit(rng) - 1.0;
        const double ph = 2.0 * pi * unit(rng);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return Vec3{r * s * std::cos(ph), r * s * std::sin(ph), r * z};
      };
      auto nrm = [](const Vec3 &v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };
      Moments4 m;
      for (std::uint64_t it = 0; it < count; ++it) {
        const double rX = sx.sample(rng);
        const Vec3 X = direction(rX);
        const double r1 = unit(rng) < 0.5 ? sk.sample(rng) : s0.sample(rng);
        const Vec3 x1v = direction(r1);
        const double r2 = s0.sample(rng);
        const Vec3 x2v = direction(r2);
        const double r3 = s0.sample(rng);
        const Vec3 x3v = direction(r3);
        const double q = sx.density(rX) * (0.5 * sk.density(r1) + 0.5 * s0.density(r1)) *
                         s0.density(r2) * s0.density(r3);
        Vec3 s, t, star, pa, pb, pc, pd, x1, x2, x3, x4;
        for (int c = 0; c < 3; ++c) {
          s[c] = 0.25 * (x1v[c] + 2.0 * x2v[c] + x3v[c]);
          t[c] = 0.25 * (x3v[c] - x1v[c]);
          star[c] = -(x1v[c] + x2v[c] + x3v[c]);
          pa[c] = X[c] - h * s[c];
          pb[c] = X[c] - h * t[c];
          pc[c] = X[c] + h * s[c];
          pd[c] = X[c] + h * t[c];
          x1[c] = X[c] - 0.25 * h * (3.0 * x1v[c] + 2.0 * x2v[c] + x3v[c]);
          x2[c] = x1[c] + h * x1v[c];
          x3[c] = x2[c] + h * x2v[c];
          x4[c] = x3[c] + h * x3v[c];
        }
        const double na = nrm(pa);
        const double p2 = psi(nrm(pb)), p3 = psi(nrm(pc)), p4 = psi(nrm(pd));
        const double p1 = psi(na);
        const double a2 = a0(r2), a3 = a0(r3), as = a0(nrm(star));
        const double wgt = h / q;
        const double rest = p2 * p3 * p4 * a2 * a3 * as;
        const double a1 = a0(r1);
        const double plain = wgt * p1 * a1 * rest;
        const double main = wgt * p1 * ka0(r1) * rest;
        const double lap = wgt * (-0.25 * h * h * lap_psi(na)) * a1 * rest;
        const double trap =
            plain * 0.25 * (W(nrm(x1)) + W(nrm(x2)) + W(nrm(x3)) + W(nrm(x4)));
        const double kin = main + lap;
        const double hb = kin + h * h * trap - D * h * h * plain;
        const double v[4] = {kin, trap, plain, hb};
        for (int c = 0; c < 4; ++c) {
          m.s[c] += v[c];
          m.s2[c] += v[c] * v[c];
        }
      }
      results[b] = m;
    }
  };
  const int nt = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(opt.threads), blocks));
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i)
    pool.emplace_back(worker);
  worker();
  for (auto &th : pool)
    th.join();

  Moments4 tot;
  for (const auto &m : results)
    for (int c = 0; c < 4; ++c) {
      tot.s[c] += m.s[c];
      tot.s2[c] += m.s2[c];
    }
  const double N = static_cast<double>(opt.samples);
  Estimate *dst[4] = {&out.kinetic, &out.trap, &out.plain, &out.hbar};
  for (int c = 0; c < 4; ++c) {
    const double mean = tot.s[c] / N;
    const double var = std::max(0.0, tot.s2[c] / N - mean * mean) * N / (N - 1.0);
    dst[c]->mean = mean;
    dst[c]->stderr_ = std::sqrt(var / N);
  }
  if (out.hbar.stderr_ > 0.05 * std::abs(out.hbar.mean)) {
    std::ostringstream os;
    os << "quartic MC: relative standard error " << out.hbar.stderr_ / std::abs(out.hbar.mean)
       << " above 0.05";
    warn(diag, os.str());
  }
  return out;
}

EnergyBreakdown trial_bcs_energy(const TrialState &t, const Trap &W, double D,
                                 double g_bcs, const MCOptions &opt, Diagnostics *diag) {
  const auto &k = t.kernel;
  EnergyBreakdown e;
  e.h = k.h;
  e.lambda = t.lambda;
  e.s1 = t.s1;
  e.quad = quadratic_energy(k, W, D);
  e.quartic = quartic_trace_mc(k, W, D, opt, diag);
  const double y = 1.0 + t.lambda * k.h;
  e.total_bcs.mean = e.quad.total + y * e.quartic.hbar.mean;
  e.total_bcs.stderr_ = y * e.quartic.hbar.stderr_;
  const auto n = gp::field_norms(k.psi, W);
  e.gp_reference = k.h * (0.25 * n.grad_sq + n.trap - D * n.l2_sq + g_bcs * n.l4_4);
  e.A0 = n.trap + n.l2_sq;
  const double h2 = k.h * k.h;
  e.quartic_residual.mean = (e.quartic.kinetic.mean - k.h * g_bcs * n.l4_4) / h2;
  e.quartic_residual.stderr_ = e.quartic.kinetic.stderr_ / h2;
  e.reduction_slack.mean = t.lambda * k.h * e.quartic.hbar.mean;
  e.reduction_slack.stderr_ = t.lambda * k.h * e.quartic.hbar.stderr_;
  return e;
}

} // namespace bcsgp::bcs
