#pragma once
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace bcsgp::numerics {

enum class GridScheme { uniform, graded };

/// Radial grid on (0, r_max] carrying quadrature weights for the measure r^2 dr.
///
/// Nodes are r_i = r_max * x_i^p, x_i = i/n (i = 1..n), with p = 1 (uniform) or
/// p = 2 (graded, clustered near the origin). The weights come from the
/// trapezoidal rule in x with Gregory end corrections (exact up to degree 5)
/// at r_max, and at the origin too for the graded map. On a uniform grid the
/// rule integrates r^2 times any even polynomial exactly. The implicit node at
/// r = 0 carries zero integrand.
class RadialGrid {
public:
  static std::shared_ptr<const RadialGrid>
  build(double r_max, std::size_t n, GridScheme scheme = GridScheme::uniform);

  double r_max() const { return m_r_max; }
  std::size_t size() const { return m_r.size(); }
  GridScheme scheme() const { return m_scheme; }
  bool is_uniform() const { return m_scheme == GridScheme::uniform; }
  /// Spacing of the uniform grid, or the spacing in the mapping variable x.
  double step() const { return m_step; }

  std::span<const double> nodes() const { return m_r; }
  double r(std::size_t i) const { return m_r[i]; }
  /// Weights w_i for  int_0^{r_max} f(r) r^2 dr  ~=  sum_i w_i f(r_i).
  std::span<const double> weights() const { return m_w; }
  /// Weights for  int_0^{r_max} g(r) dr  (= w_i / r_i^2).
  std::span<const double> line_weights() const { return m_line; }

  /// int_0^{r_max} f(r) r^2 dr for samples f on the nodes.
  double integrate(std::span<const double> f) const;
  /// 4 pi int_0^{r_max} f(r) r^2 dr, the integral of a radial function over R^3.
  double integrate3d(std::span<const double> f) const;

  /// The momentum grid dual to a uniform grid: p_k = k pi / r_max, k = 1..n.
  /// Sine transforms between a uniform grid and its dual are exactly unitary.
  std::shared_ptr<const RadialGrid> dual() const;
  bool is_dual_of(const RadialGrid &other) const;

private:
  RadialGrid() = default;
  double m_r_max{0.0};
  double m_step{0.0};
  GridScheme m_scheme{GridScheme::uniform};
  std::vector<double> m_r, m_w, m_line;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// End-correction factors of the Gregory-type trapezoidal rule with `m`
/// corrected nodes per end. Entry i multiplies the trapezoid weight of node i
/// counted from the end (node 0 is the endpoint itself).
std::vector<double> gregory_end_weights(std::size_t m);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(std::size_t n);
};

/// Composite Gauss-Legendre rule on [a, b] with `panels` panels of `order` points.
struct CompositeRule {
  std::vector<double> x, w;
};
CompositeRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                       std::size_t order);

} // namespace bcsgp::numerics
