#pragma once
#include <string>
#include <vector>

namespace bcsgp::numerics {

/// Radial two-body interaction V (microscopic units).
struct Interaction {
  enum class Kind { spherical_well, gaussian_well, tabulated };
  Kind kind{Kind::gaussian_well};
  /// Well depth V0 > 0 (V = -V0 inside the well / at the origin).
  double depth{0.0};
  /// Radius of the spherical well or width of the Gaussian well
  /// (V = -V0 exp(-r^2 / width^2)).
  double range{1.0};
  /// Tabulated samples, linearly interpolated, zero beyond the last node.
  std::vector<double> table_r, table_v;

  static Interaction spherical_well(double depth, double radius);
  static Interaction gaussian_well(double depth, double width = 1.0);

  double operator()(double r) const;
  /// Mean of V over the shell [a, b] with respect to dr. Exact for the
  /// spherical well, where point sampling would miss the discontinuity.
  double cell_average(double a, double b) const;
  /// Length scale the grid has to resolve.
  double length_scale() const;
  void validate() const;
  std::string describe() const;
};

/// Radial trapping potential W (macroscopic units).
struct Trap {
  enum class Kind { harmonic, power, tabulated };
  Kind kind{Kind::harmonic};
  /// W = coefficient * r^2 (harmonic) or coefficient * r^beta (power).
  double coefficient{1.0};
  double beta{2.0};
  std::vector<double> table_r, table_w;

  static Trap harmonic(double coefficient = 1.0);
  static Trap power(double beta, double coefficient);

  double operator()(double r) const;
  /// Exponent of the growth at infinity.
  double growth_exponent() const;
  void validate() const;
  std::string describe() const;
};

/// The model of one study point: mu = -E0 + D h^2.
struct PhysicsModel {
  Interaction V;
  Trap W;
  double h{0.3};
  double D{0.0};
  void validate() const;
};

} // namespace bcsgp::numerics
