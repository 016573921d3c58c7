#pragma once
#include "bcsgp/numerics/grid.hpp"
#include <functional>
#include <span>
#include <vector>

namespace bcsgp::numerics {

/// Behaviour at r = 0 used by interpolation: `even` functions are smooth radial
/// functions on R^3 (mirrored across the origin), `none` extrapolates one-sided.
enum class Parity { even, none };

/// A spherically symmetric function on R^3 sampled on a radial grid.
///
/// Values are real. Evaluation between nodes uses 4-point Lagrange
/// interpolation; the function vanishes beyond r_max.
class RadialFunction {
public:
  RadialFunction() = default;
  RadialFunction(GridPtr grid, std::vector<double> values,
                 Parity parity = Parity::even);

  static RadialFunction sample(GridPtr grid,
                               const std::function<double(double)> &f,
                               Parity parity = Parity::even);
  static RadialFunction zero(GridPtr grid);

  const RadialGrid &grid() const { return *m_grid; }
  const GridPtr &grid_ptr() const { return m_grid; }
  bool empty() const { return !m_grid; }
  std::size_t size() const { return m_values.size(); }
  Parity parity() const { return m_parity; }
  std::span<const double> values() const { return m_values; }
  std::vector<double> &mutable_values() { return m_values; }
  double operator[](std::size_t i) const { return m_values[i]; }

  double operator()(double r) const;

  /// ||f||_2 over R^3.
  double norm2() const;
  /// (4 pi int |f|^p r^2 dr)^{1/p}.
  double norm(double p) const;
  /// || |x|^k f ||_2.
  double weighted_norm2(double k) const;
  /// <f, g> over R^3; both must live on the same grid.
  double inner(const RadialFunction &g) const;
  double max_abs() const;

  RadialFunction scaled(double c) const;
  RadialFunction resampled(GridPtr grid) const;

private:
  GridPtr m_grid;
  std::vector<double> m_values;
  Parity m_parity{Parity::even};
};

/// Laplacian of a radial function, computed from u = r f by central
/// differences (fourth order on uniform grids, second order otherwise).
/// The value at r_max uses a homogeneous Dirichlet condition.
RadialFunction radial_laplacian(const RadialFunction &f);

} // namespace bcsgp::numerics
