#include "bcsgp/numerics/grid.hpp"
#include "bcsgp/numerics/errors.hpp"
#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

namespace bcsgp::numerics {

namespace {
constexpr std::size_t k_gregory_order = 6;

// Bernoulli numbers B_{2k}, k = 1..4.
constexpr double k_bernoulli[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0,
                                  -1.0 / 30.0};
} // namespace

std::vector<double> gregory_end_weights(std::size_t m) {
  // The left-end correction sum_i c_i f(i) must reproduce the Euler-Maclaurin
  // term sum_k B_2k/(2k)! f^(2k-1)(0) for every polynomial of degree < m.
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i)
      A(j, i) = std::pow(static_cast<double>(i), static_cast<double>(j));
    if (j % 2 == 1 && (j + 1) / 2 <= 4)
      rhs(j) = k_bernoulli[(j + 1) / 2 - 1] / static_cast<double>(j + 1);
  }
  A(0, 0) = 1.0; // 0^0
  const Eigen::VectorXd c = A.fullPivLu().solve(rhs);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i)
    out[i] = (i == 0 ? 0.5 : 1.0) + c(static_cast<Eigen::Index>(i));
  return out;
}

GridPtr RadialGrid::build(double r_max, std::size_t n, GridScheme scheme) {
  if (!(r_max > 0.0))
    throw ConfigError("radial grid: r_max must be positive, got " +
                      std::to_string(r_max));
  if (n < 16)
    throw ConfigError("radial grid: need at least 16 nodes, got " +
                      std::to_string(n));

  auto g = std::shared_ptr<RadialGrid>(new RadialGrid());
  g->m_r_max = r_max;
  g->m_scheme = scheme;
  g->m_step = 1.0 / static_cast<double>(n);
  g->m_r.resize(n);
  g->m_w.resize(n);
  g->m_line.resize(n);

  // Trapezoid weights in x over nodes 0..n, end-corrected at r_max. On a
  // uniform grid the integrands r^2 f(r) of smooth radial functions are even
  // in r, so the plain trapezoid rule is already spectrally accurate at the
  // origin; the graded map makes them odd in x and both ends are corrected.
  std::vector<double> wx(n + 1, 1.0);
  const auto ends = gregory_end_weights(k_gregory_order);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (scheme == GridScheme::graded)
      wx[i] = ends[i];
    wx[n - i] = ends[i];
  }

  const double dx = g->m_step;
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = static_cast<double>(i) * dx;
    double r, drdx;
    if (scheme == GridScheme::uniform) {
      r = r_max * x;
      drdx = r_max;
    } else {
      r = r_max * x * x;
      drdx = 2.0 * r_max * x;
    }
    if (i == n)
      r = r_max;
    g->m_r[i - 1] = r;
    g->m_line[i - 1] = wx[i] * dx * drdx;
    g->m_w[i - 1] = g->m_line[i - 1] * r * r;
  }
  if (scheme == GridScheme::uniform)
    g->m_step = r_max / static_cast<double>(n);
  return g;
}

double RadialGrid::integrate(std::span<const double> f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < m_w.size(); ++i)
    s += m_w[i] * f[i];
  return s;
}

double RadialGrid::integrate3d(std::span<const double> f) const {
  return 4.0 * std::numbers::pi * integrate(f);
}

GridPtr RadialGrid::dual() const {
  if (!is_uniform())
    throw ConfigError("dual momentum grid requires a uniform radial grid");
  const auto n = size();
  return build(std::numbers::pi * static_cast<double>(n) / m_r_max, n,
               GridScheme::uniform);
}

bool RadialGrid::is_dual_of(const RadialGrid &other) const {
  if (!is_uniform() || !other.is_uniform() || size() != other.size())
    return false;
  const double expected =
      std::numbers::pi * static_cast<double>(other.size()) / other.r_max();
  return std::abs(m_r_max - expected) <= 1e-12 * expected;
}

GaussLegendre::GaussLegendre(std::size_t n) : x(n), w(n) {
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(k) - 1.0) * z * p1 -
              (static_cast<double>(k) - 1.0) * p2) /
             static_cast<double>(k);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15)
        break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    w[n - 1 - i] = w[i];
  }
}

CompositeRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                       std::size_t order) {
  const GaussLegendre gl(order);
  CompositeRule rule;
  rule.x.reserve(panels * order);
  rule.w.reserve(panels * order);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    for (std::size_t k = 0; k < order; ++k) {
      rule.x.push_back(lo + 0.5 * width * (gl.x[k] + 1.0));
      rule.w.push_back(0.5 * width * gl.w[k]);
    }
  }
  return rule;
}

} // namespace bcsgp::numerics
