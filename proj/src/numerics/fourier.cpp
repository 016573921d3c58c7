#include "bcsgp/numerics/fourier.hpp"
#include <algorithm>
#include <cmath>
#include <fftw3.h>
#include <mutex>
#include <numbers>
#include <sstream>

namespace bcsgp::numerics {

namespace {
// FFTW planning is not thread-safe.
std::mutex g_fftw_plan_mutex;

std::vector<double> dst1(std::vector<double> in) {
  const int n = static_cast<int>(in.size());
  std::vector<double> out(in.size());
  fftw_plan plan;
  {
    std::lock_guard lock(g_fftw_plan_mutex);
    plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_RODFT00, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(g_fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}
} // namespace

double tail_ratio(const RadialFunction &f) {
  const double mx = f.max_abs();
  if (mx == 0.0)
    return 0.0;
  const std::size_t n = f.size();
  const std::size_t window = std::max<std::size_t>(n / 50, 4);
  double t = 0.0;
  for (std::size_t i = n - window; i < n; ++i)
    t = std::max(t, std::abs(f[i]));
  return t / mx;
}

RadialFunction radial_fourier(const RadialFunction &f, const GridPtr &p_grid,
                              Diagnostics *diag) {
  const double tr = tail_ratio(f);
  if (tr > 1e-8) {
    std::ostringstream os;
    os << "radial_fourier: tail not decayed (|f| near r_max is " << tr
       << " of max)";
    warn(diag, os.str());
  }
  const auto &g = f.grid();
  const std::size_t np = p_grid->size();
  std::vector<double> out(np, 0.0);

  if (p_grid->is_dual_of(g)) {
    // p_k r_i = pi k i / n; node i = n has sin(pi k) = 0.
    const std::size_t n = g.size();
    const double dr = g.step();
    std::vector<double> u(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      u[i] = g.r(i) * f[i];
    const auto s = dst1(std::move(u));
    // RODFT00 computes 2 sum_j x_j sin(pi (j+1)(k+1)/n).
    const double c = std::sqrt(2.0 / std::numbers::pi) * dr * 0.5;
    for (std::size_t k = 0; k + 1 < np; ++k)
      out[k] = c * s[k] / p_grid->r(k);
    out[np - 1] = 0.0;
    return RadialFunction(p_grid, std::move(out), Parity::even);
  }

  const auto line = g.line_weights();
  const double c = std::sqrt(2.0 / std::numbers::pi);
  for (std::size_t k = 0; k < np; ++k) {
    const double p = p_grid->r(k);
    double s = 0.0;
    if (p < 1e-8) {
      for (std::size_t i = 0; i < g.size(); ++i)
        s += line[i] * g.r(i) * g.r(i) * f[i];
      out[k] = c * s;
    } else {
      for (std::size_t i = 0; i < g.size(); ++i)
        s += line[i] * g.r(i) * std::sin(p * g.r(i)) * f[i];
      out[k] = c * s / p;
    }
  }
  return RadialFunction(p_grid, std::move(out), Parity::even);
}

} // namespace bcsgp::numerics
