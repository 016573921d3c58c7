#include "bcsgp/numerics/radial_function.hpp"
#include "bcsgp/numerics/errors.hpp"
#include <algorithm>
#include <cmath>
#include <numbers>

namespace bcsgp::numerics {

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values,
                               Parity parity)
    : m_grid(std::move(grid)), m_values(std::move(values)), m_parity(parity) {
  if (!m_grid)
    throw ConfigError("radial function: null grid");
  if (m_values.size() != m_grid->size())
    throw ConfigError("radial function: value count does not match grid");
}

RadialFunction RadialFunction::sample(GridPtr grid,
                                      const std::function<double(double)> &f,
                                      Parity parity) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = f(grid->r(i));
  return RadialFunction(std::move(grid), std::move(v), parity);
}

RadialFunction RadialFunction::zero(GridPtr grid) {
  const auto n = grid->size();
  return RadialFunction(std::move(grid), std::vector<double>(n, 0.0));
}

double RadialFunction::operator()(double r) const {
  r = std::abs(r);
  const auto &g = *m_grid;
  const std::size_t n = g.size();
  if (r > g.r_max())
    return 0.0;

  // Index k of the first node with r_k >= r.
  std::size_t k;
  if (g.is_uniform()) {
    k = static_cast<std::size_t>(std::ceil(r / g.step()));
    k = k == 0 ? 0 : k - 1;
    if (k >= n)
      k = n - 1;
    if (g.r(k) < r && k + 1 < n)
      ++k;
  } else {
    const auto nodes = g.nodes();
    k = static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), r) - nodes.begin());
    if (k >= n)
      k = n - 1;
  }

  // Stencil indices j0..j0+3 in "extended" numbering where index -m-1 is the
  // mirror of node m (even parity).
  long j0 = static_cast<long>(k) - 2;
  if (m_parity == Parity::none && j0 < 0)
    j0 = 0;
  if (j0 + 3 > static_cast<long>(n) - 1)
    j0 = static_cast<long>(n) - 4;

  double xs[4], ys[4];
  for (int a = 0; a < 4; ++a) {
    const long j = j0 + a;
    if (j >= 0) {
      xs[a] = g.r(static_cast<std::size_t>(j));
      ys[a] = m_values[static_cast<std::size_t>(j)];
    } else {
      const auto m = static_cast<std::size_t>(-j - 1);
      xs[a] = -g.r(m);
      ys[a] = m_values[m];
    }
  }
  double s = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a)
        l *= (r - xs[b]) / (xs[a] - xs[b]);
    s += l * ys[a];
  }
  return s;
}

double RadialFunction::norm2() const { return std::sqrt(inner(*this)); }

double RadialFunction::norm(double p) const {
  double s = 0.0;
  const auto w = m_grid->weights();
  for (std::size_t i = 0; i < m_values.size(); ++i)
    s += w[i] * std::pow(std::abs(m_values[i]), p);
  return std::pow(4.0 * std::numbers::pi * s, 1.0 / p);
}

double RadialFunction::weighted_norm2(double k) const {
  double s = 0.0;
  const auto w = m_grid->weights();
  for (std::size_t i = 0; i < m_values.size(); ++i)
    s += w[i] * std::pow(m_grid->r(i), 2.0 * k) * m_values[i] * m_values[i];
  return std::sqrt(4.0 * std::numbers::pi * s);
}

double RadialFunction::inner(const RadialFunction &g) const {
  if (g.m_grid != m_grid)
    throw ConfigError("radial inner product: functions live on different grids");
  double s = 0.0;
  const auto w = m_grid->weights();
  for (std::size_t i = 0; i < m_values.size(); ++i)
    s += w[i] * m_values[i] * g.m_values[i];
  return 4.0 * std::numbers::pi * s;
}

double RadialFunction::max_abs() const {
  double m = 0.0;
  for (double v : m_values)
    m = std::max(m, std::abs(v));
  return m;
}

RadialFunction RadialFunction::scaled(double c) const {
  RadialFunction out = *this;
  for (double &v : out.m_values)
    v *= c;
  return out;
}

RadialFunction RadialFunction::resampled(GridPtr grid) const {
  return sample(std::move(grid), [this](double r) { return (*this)(r); },
                m_parity);
}

RadialFunction radial_laplacian(const RadialFunction &f) {
  const auto &g = f.grid();
  const std::size_t n = g.size();
  // u at extended indices: u(-m) = -u(m), u(0) = 0.
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i)
    u[i] = g.r(i) * f[i];
  auto uu = [&](long j) -> double {
    if (j == 0)
      return 0.0;
    if (j < 0)
      return -u[static_cast<std::size_t>(-j - 1)];
    if (j > static_cast<long>(n))
      return 0.0;
    return u[static_cast<std::size_t>(j - 1)];
  };

  std::vector<double> lap(n, 0.0);
  if (g.is_uniform()) {
    const double d2 = g.step() * g.step();
    for (std::size_t i = 1; i <= n; ++i) {
      const long j = static_cast<long>(i);
      double upp;
      if (i + 2 <= n)
        upp = (-uu(j + 2) + 16.0 * uu(j + 1) - 30.0 * uu(j) + 16.0 * uu(j - 1) -
               uu(j - 2)) /
              (12.0 * d2);
      else
        upp = (uu(j + 1) - 2.0 * uu(j) + uu(j - 1)) / d2;
      lap[i - 1] = upp / g.r(i - 1);
    }
  } else {
    for (std::size_t i = 1; i <= n; ++i) {
      const double r = g.r(i - 1);
      const double rm = i >= 2 ? g.r(i - 2) : 0.0;
      const double rp = i < n ? g.r(i) : 2.0 * r - rm;
      const double hm = r - rm, hp = rp - r;
      const long j = static_cast<long>(i);
      const double upp =
          2.0 * (hm * uu(j + 1) - (hm + hp) * uu(j) + hp * uu(j - 1)) /
          (hm * hp * (hm + hp));
      lap[i - 1] = upp / r;
    }
  }
  return RadialFunction(f.grid_ptr(), std::move(lap), f.parity());
}

} // namespace bcsgp::numerics
