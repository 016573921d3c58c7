#include "bcsgp/numerics/eigensolver.hpp"
#include "bcsgp/numerics/errors.hpp"
#include <algorithm>
#include <cmath>
#include <lapacke.h>
#include <numbers>
#include <string>

namespace bcsgp::numerics {

RadialOperator::RadialOperator(GridPtr grid, double kinetic_factor, int ell,
                               std::span<const double> potential)
    : m_grid(std::move(grid)), m_a(kinetic_factor), m_ell(ell) {
  if (!(kinetic_factor > 0.0))
    throw ConfigError("radial operator: kinetic factor must be positive");
  if (ell < 0)
    throw ConfigError("radial operator: angular momentum must be >= 0");
  const auto &g = *m_grid;
  if (potential.size() != g.size())
    throw ConfigError("radial operator: potential size does not match grid");
  const std::size_t m = g.size() - 1;
  const auto line = g.line_weights();

  m_mass.assign(line.begin(), line.begin() + static_cast<long>(m));
  m_inv_edge.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j)
    m_inv_edge[j] = 1.0 / (g.r(j) - (j == 0 ? 0.0 : g.r(j - 1)));
  m_pot.resize(m);
  const double cent = kinetic_factor * ell * (ell + 1.0);
  for (std::size_t i = 0; i < m; ++i)
    m_pot[i] = potential[i] + cent / (g.r(i) * g.r(i));

  m_d.resize(m);
  m_e.resize(m > 0 ? m - 1 : 0);
  for (std::size_t i = 0; i < m; ++i)
    m_d[i] = kinetic_factor * (m_inv_edge[i] + m_inv_edge[i + 1]) / m_mass[i] +
             m_pot[i];
  for (std::size_t i = 0; i + 1 < m; ++i)
    m_e[i] = -kinetic_factor * m_inv_edge[i + 1] /
             std::sqrt(m_mass[i] * m_mass[i + 1]);
}

double RadialOperator::stiffness_form(std::span<const double> u) const {
  const std::size_t m = unknowns();
  double s = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double left = j == 0 ? 0.0 : u[j - 1];
    const double right = j == m ? 0.0 : u[j];
    s += (right - left) * (right - left) * m_inv_edge[j];
  }
  return s;
}

std::vector<double> RadialOperator::stiffness_apply(std::span<const double> u) const {
  const std::size_t m = unknowns();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i == 0 ? 0.0 : u[i - 1];
    const double right = i + 1 == m ? 0.0 : u[i + 1];
    out[i] = (u[i] - left) * m_inv_edge[i] + (u[i] - right) * m_inv_edge[i + 1];
  }
  return out;
}

std::vector<double> RadialOperator::to_u(const RadialFunction &f) const {
  if (f.grid_ptr() != m_grid)
    throw ConfigError("radial operator: function lives on a different grid");
  std::vector<double> u(unknowns());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = m_grid->r(i) * f[i];
  return u;
}

RadialFunction RadialOperator::from_u(std::span<const double> u) const {
  std::vector<double> f(m_grid->size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i)
    f[i] = u[i] / m_grid->r(i);
  return RadialFunction(m_grid, std::move(f));
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> off,
                                            std::size_t k) {
  const auto n = static_cast<lapack_int>(diag.size());
  std::vector<double> d(diag.begin(), diag.end()), e(off.begin(), off.end());
  e.push_back(0.0);
  std::vector<double> w(diag.size());
  std::vector<lapack_int> ifail(diag.size());
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dstevx(
      LAPACK_COL_MAJOR, 'N', 'I', n, d.data(), e.data(), 0.0, 0.0, 1,
      static_cast<lapack_int>(k), abstol, &found, w.data(), nullptr, 1,
      ifail.data());
  if (info != 0 || found != static_cast<lapack_int>(k))
    throw ConvergenceError("tridiagonal eigenvalues: LAPACK dstevx failed (info=" +
                               std::to_string(info) + ")",
                           std::nan(""));
  w.resize(k);
  return w;
}

bool tridiagonal_solve(std::vector<double> sub, std::vector<double> diag,
                       std::vector<double> sup, std::vector<double> &rhs) {
  const auto n = static_cast<lapack_int>(diag.size());
  const lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, sub.data(),
                                        diag.data(), sup.data(), rhs.data(), n);
  return info == 0;
}

bool spd_tridiagonal_solve(std::vector<double> diag, std::vector<double> off,
                           std::vector<double> &rhs) {
  const auto n = static_cast<lapack_int>(diag.size());
  const lapack_int info =
      LAPACKE_dptsv(LAPACK_COL_MAJOR, n, 1, diag.data(), off.data(), rhs.data(), n);
  return info == 0;
}

namespace {
double residual_norm(const RadialOperator &op, std::span<const double> v,
                     double E) {
  const auto d = op.sym_diag();
  const auto e = op.sym_off();
  const std::size_t m = d.size();
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double av = (d[i] - E) * v[i];
    if (i > 0)
      av += e[i - 1] * v[i - 1];
    if (i + 1 < m)
      av += e[i] * v[i + 1];
    s += av * av;
  }
  return std::sqrt(s);
}

double rayleigh(const RadialOperator &op, std::span<const double> v) {
  const auto d = op.sym_diag();
  const auto e = op.sym_off();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    num += d[i] * v[i] * v[i];
    if (i + 1 < d.size())
      num += 2.0 * e[i] * v[i] * v[i + 1];
    den += v[i] * v[i];
  }
  return num / den;
}
} // namespace

std::vector<EigenPair> radial_eigensolve(std::span<const double> potential,
                                         double kinetic_factor, int ell,
                                         const GridPtr &grid, std::size_t k,
                                         double tol) {
  if (k == 0)
    return {};
  const RadialOperator op(grid, kinetic_factor, ell, potential);
  const std::size_t m = op.unknowns();
  if (k > m)
    throw ConfigError("radial eigensolve: more eigenpairs requested than unknowns");

  std::vector<double> d(op.sym_diag().begin(), op.sym_diag().end());
  std::vector<double> e(op.sym_off().begin(), op.sym_off().end());
  e.push_back(0.0);
  std::vector<double> w(m), z(m * k);
  std::vector<lapack_int> ifail(m);
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dstevx(
      LAPACK_COL_MAJOR, 'V', 'I', static_cast<lapack_int>(m), d.data(), e.data(),
      0.0, 0.0, 1, static_cast<lapack_int>(k), abstol, &found, w.data(),
      z.data(), static_cast<lapack_int>(m), ifail.data());
  if (info < 0 || found != static_cast<lapack_int>(k))
    throw ConvergenceError("radial eigensolve: LAPACK dstevx failed (info=" +
                               std::to_string(info) + ")",
                           std::nan(""));

  std::vector<EigenPair> out;
  out.reserve(k);
  const auto mass = op.mass();
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> v(z.begin() + static_cast<long>(j * m),
                          z.begin() + static_cast<long>((j + 1) * m));
    double E = w[j];
    double res = residual_norm(op, v, E);
    // A failed or loose vector from dstevx is polished by inverse iteration.
    for (int it = 0; it < 4 && res > tol * std::max(1.0, std::abs(E)); ++it) {
      const double shift = E + 1e-10 * std::max(1.0, std::abs(E));
      std::vector<double> sub(e.begin(), e.end() - 1), sup = sub, dg(m);
      for (std::size_t i = 0; i < m; ++i)
        dg[i] = op.sym_diag()[i] - shift;
      if (!tridiagonal_solve(sub, dg, sup, v))
        break;
      double nrm = 0.0;
      for (double x : v)
        nrm += x * x;
      nrm = std::sqrt(nrm);
      for (double &x : v)
        x /= nrm;
      E = rayleigh(op, v);
      res = residual_norm(op, v, E);
    }
    if (res > tol * std::max(1.0, std::abs(E)))
      throw ConvergenceError("radial eigensolve: eigenpair " + std::to_string(j) +
                                 " residual " + std::to_string(res) +
                                 " above tolerance",
                             res);

    // Positive dominant lobe.
    const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    const double sign = *big < 0.0 ? -1.0 : 1.0;
    std::vector<double> u(m);
    const double c = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (std::size_t i = 0; i < m; ++i)
      u[i] = sign * c * v[i] / std::sqrt(mass[i]);
    out.push_back({E, op.from_u(u), res});
  }
  return out;
}

std::vector<EigenPair> radial_eigensolve(const RadialFunction &potential,
                                         double kinetic_factor, int ell,
                                         std::size_t k, double tol) {
  return radial_eigensolve(potential.values(), kinetic_factor, ell,
                           potential.grid_ptr(), k, tol);
}

} // namespace bcsgp::numerics
