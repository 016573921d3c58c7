#pragma once
#include "bcsgp/bcs/bcs.hpp"
#include "bcsgp/gp/gp.hpp"
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bcsgp::asymptotics {

using bcs::EnergyBreakdown;
using bcs::Estimate;
using numerics::RadialFunction;
using numerics::Trap;

/// Fewer than four significant points, or a degenerate fit.
class FitError : public ConvergenceError {
public:
  explicit FitError(const std::string &what) : ConvergenceError(what, 0.0) {}
};

/// The bracket handed to the critical-offset search has no sign change.
class NoSignChange : public DomainError {
public:
  using DomainError::DomainError;
};

/// Everything fixed across a study: two-body data, trap, grids and MC setup.
struct Study {
  std::shared_ptr<const twobody::TwoBodySolution> sol;
  double g_bcs{0.0};
  Trap W;
  numerics::GridPtr trap_grid;
  double E_W{0.0};
  gp::GPOptions gp_options{};
  bcs::MCOptions mc{};
  double admissibility_delta{1e-9};
};

Study make_study(std::shared_ptr<const twobody::TwoBodySolution> sol, const Trap &W,
                 numerics::GridPtr trap_grid, Diagnostics *diag = nullptr);

struct FitPoint {
  double x;
  double value;
  double stderr_{0.0};
};

struct PowerLawFit {
  double exponent{0.0};
  double prefactor{0.0};
  double r2{0.0};
  std::size_t used{0};
  std::size_t excluded{0};
};

/// Least squares of log|value| against log x. Points with
/// |value| < 3 stderr are excluded; fewer than four remaining throws FitError.
PowerLawFit fit_power_law(const std::vector<FitPoint> &points);

struct SweepPoint {
  double h{0.0};
  bool valid{false};
  std::string flag;
  EnergyBreakdown energy{};
  Estimate residual;      ///< E^BCS / h - E^GP_D
  double quad_excess{0.0}; ///< quadratic total - h <psi|-1/4 Delta + W - D|psi>
};

struct SweepRecord {
  double D{0.0};
  bool psi_is_minimizer{true};
  double E_gp{0.0};
  gp::FieldNorms norms{};
  std::vector<double> h_values;
  std::vector<SweepPoint> points;
  std::optional<PowerLawFit> fit;
  std::optional<PowerLawFit> quad_fit;
  std::string fit_error;
  bool monotone{false};        ///< |residual| decreasing along the h list
  double lower_constant{0.0};  ///< max over h of (E^GP - E^BCS / h) / h
};

/// Trial energies for every h with psi = psi*(D) or a fixed psi. Inadmissible
/// points are kept, flagged and left out of the fit.
SweepRecord h_sweep(const Study &s, double D, const std::vector<double> &h_list,
                    const std::optional<RadialFunction> &fixed_psi = std::nullopt,
                    Diagnostics *diag = nullptr);

struct CriticalOptions {
  double width{1e-3};
  double slope_step{0.02};
  int max_evaluations{60};
};

struct Evaluation {
  double D;
  Estimate energy;
  double lambda;
  double s1;
  bool normal; ///< psi*(D) = 0
};

struct CriticalPoint {
  double h{0.0};
  double D_c{0.0};          ///< trial-family critical offset
  double lo{0.0}, hi{0.0};  ///< certified bracket: f(lo) >= 0 > f(hi)
  Estimate f_lo, f_hi;
  double slope{0.0};
  double uncertainty{0.0};
  double E_W{0.0};
  double gap{0.0};          ///< |D_c - E_W|
  double mu_c{0.0};         ///< -E0 + D_c h^2
  std::vector<Evaluation> evaluations;
};

/// Trial energy at psi = psi*(D) with common random numbers across D.
Evaluation trial_energy_at(const Study &s, double h, double D, Diagnostics *diag = nullptr);

/// Bisection on D for the sign change of the trial energy.
CriticalPoint estimate_mu_c(const Study &s, double h, double D_lo, double D_hi,
                            const CriticalOptions &opt = {}, Diagnostics *diag = nullptr);

} // namespace bcsgp::asymptotics
