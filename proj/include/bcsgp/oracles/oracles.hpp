#pragma once
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace bcsgp::oracles {

/// Binding energy E0 > 0 of the ground state of -Delta - V0 1{r < R}, from
/// k cot(kR) = -kappa with k^2 = V0 - E0, kappa^2 = E0 (bisection to 1e-12).
/// Empty below the threshold V0 R^2 = pi^2/4.
std::optional<double> square_well_oracle(double depth, double radius);

/// Normalized ground state of the square well, u(r) = r f(r) matched at R.
double square_well_state(double depth, double radius, double E0, double r);

struct HarmonicOracle {
  double energy; ///< 3 sqrt(a b)
  double gamma;  ///< ground state exp(-gamma r^2), gamma = sqrt(b/a)/2
};
/// Ground state of -a Delta + b |x|^2.
HarmonicOracle harmonic_oracle(double kinetic_factor, double coefficient);

/// All-Gaussian configuration:
///   psi(X) = A exp(-a |X|^2),  alpha0(xi) = B exp(-b |xi|^2),
/// harmonic trap W = w |x|^2, binding energy E0 and offset D.
/// The amplitudes default to L^2-normalized Gaussians.
struct GaussianCase {
  double a{1.0}, A{0.0};
  double b{0.5}, B{0.0};
  double h{0.4};
  double E0{0.5};
  double w{1.0};
  double D{0.0};
  GaussianCase normalized() const;
};

struct QuarticTraces {
  double kinetic;   ///< tr (-h^2 Delta + E0)(alpha alpha*)^2
  double trap;      ///< tr W (alpha alpha*)^2 (without the h^2)
  double plain;     ///< tr (alpha alpha*)^2
  double hbar;      ///< kinetic + h^2 trap - D h^2 plain
};

/// Closed forms by Gaussian moment calculus.
struct GaussianOracle {
  static double l2_norm_sq(double amplitude, double width);
  static double l4_norm4(double amplitude, double width);
  /// || |x| f ||_2^2 for f = amplitude exp(-width r^2).
  static double second_moment(double amplitude, double width);
  static double grad_norm_sq(double amplitude, double width);
  /// int W |psi|^2 for W = w r^2.
  static double trap_expectation(const GaussianCase &c);

  static double hs_norm_sq(const GaussianCase &c);
  static double top_singular(const GaussianCase &c);
  static double schatten(const GaussianCase &c, int n);
  /// h int W|psi|^2 + (h^3/4) ||psi||^2 || |.| alpha0 ||^2 times w.
  static double w_term(const GaussianCase &c);
  /// g_BCS = (2 pi)^3 int (p^2 + E0) |alpha0^(p)|^4 dp.
  static double g_bcs(double B, double b, double E0);
  static QuarticTraces quartic(const GaussianCase &c);
  /// GP energy of the Gaussian psi with the given g.
  static double gp_energy(const GaussianCase &c, double g);
};

/// 4-D tensor trapezoid quadrature of the per-component quartic integrals;
/// an independent check of GaussianOracle::quartic (used before admitting the
/// closed form as a test expectation).
QuarticTraces gaussian_quartic_by_quadrature(const GaussianCase &c,
                                             int points_per_dim = 41);

/// 1-D Mehler kernel exp(-c1 (x^2 + y^2) + 2 c2 x y): leading eigenvalue and
/// ratio rho of successive eigenvalues.
struct MehlerSpectrum {
  double lambda0, rho;
};
MehlerSpectrum mehler_spectrum(double c1, double c2);

/// Oracle table entry as exported to the versioned data file.
struct OracleCase {
  std::string name;
  std::string formula;
  std::string derivation;
  double expected;
  double tolerance;
  std::vector<std::pair<std::string, double>> inputs;
};

inline constexpr int k_oracle_table_version = 1;
std::vector<OracleCase> oracle_cases();
/// JSON document {"version":..., "cases":[...]}.
nlohmann::json oracle_table_json();

} // namespace bcsgp::oracles
