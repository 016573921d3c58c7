#pragma once
#include "bcsgp/numerics/errors.hpp"
#include "bcsgp/numerics/model.hpp"
#include "bcsgp/numerics/radial_function.hpp"
#include <vector>

namespace bcsgp::twobody {

using numerics::GridPtr;
using numerics::Interaction;
using numerics::RadialFunction;

/// -Delta + V has no negative eigenvalue.
class NoBoundState : public DomainError {
public:
  NoBoundState(const std::string &what, double lowest)
      : DomainError(what), m_lowest(lowest) {}
  double lowest_eigenvalue() const { return m_lowest; }

private:
  double m_lowest;
};

/// The spectral gap above the two-body ground state is not positive.
class GapViolated : public DomainError {
public:
  GapViolated(const std::string &what, double gap) : DomainError(what), m_gap(gap) {}
  double gap() const { return m_gap; }

private:
  double m_gap;
};

/// Relative-coordinate grid: uniform, spacing fixed, box r_max chosen from the
/// decay rate as max(min_r_max, decay_lengths / b) unless set explicitly.
struct GridSpec {
  double spacing{1e-3};
  double r_max{0.0}; ///< 0 selects the adaptive box
  double min_r_max{8.0};
  double decay_lengths{20.0};
  double max_r_max{512.0};
  double eigen_tol{1e-8};
};

struct Moments {
  double sqrt_r_l2;  ///< || |.|^{1/2} alpha0 ||_2
  double r_l2;       ///< || |.| alpha0 ||_2
  double r_beta_l2;  ///< || |.|^{beta/2} alpha0 ||_2
  double l1;         ///< || alpha0 ||_1
  double V_l1;       ///< || V alpha0 ||_1
  double hat_l2, hat_l4, hat_l6; ///< || alpha0^ ||_p
};

struct DecayFit {
  double rate;       ///< b in alpha0 ~ exp(-b r) / r
  double window_lo, window_hi;
  std::size_t window_nodes;
  double rms;        ///< rms deviation of the linear fit of log|r alpha0|
};

struct GapResult {
  double gap;
  double epsilon;
  int worst_sector;
  std::vector<double> per_sector; ///< lowest eigenvalue per l = 0..l_max
};

struct TwoBodySolution {
  Interaction V;
  double E0{0.0};
  RadialFunction alpha0;
  /// (-Delta + E0) alpha0, which equals -V alpha0 for a solved state.
  RadialFunction kinetic_alpha0;
  RadialFunction alpha0_hat;
  double residual{0.0};
  double lowest_l1{0.0};
  bool synthetic{false}; ///< alpha0 given directly, V unused
  GapResult gap{};
  DecayFit decay{};
  Moments moments{};
};

/// Lowest l = 0 eigenpair of -Delta + V on an adaptive box.
/// Throws NoBoundState when the lowest eigenvalue is >= 0 in the largest box.
TwoBodySolution solve_ground_state(const Interaction &V, const GridSpec &spec = {},
                                   Diagnostics *diag = nullptr);

/// Lowest eigenvalue of P[-(1-eps)Delta + V + E0]P over sectors l <= l_max,
/// with P projecting out alpha0 (in l = 0). Throws GapViolated when <= 0.
GapResult compute_spectral_gap(const TwoBodySolution &sol, double epsilon,
                               int l_max, Diagnostics *diag = nullptr);

/// Decay rate from a least-squares fit of log|r alpha0| on [r_max/2, 3 r_max/4].
DecayFit fit_decay_rate(const RadialFunction &alpha0, Diagnostics *diag = nullptr);

/// Moment table (requires alpha0_hat to be set for the momentum norms).
Moments compute_moments(const TwoBodySolution &sol, double beta);

/// g_BCS = (2 pi)^3 4 pi int p^2 (p^2 + E0) |alpha0^(p)|^4 dp.
double compute_g_bcs(const RadialFunction &alpha0_hat, double E0,
                     Diagnostics *diag = nullptr);

/// <alpha0, (-Delta + V + E0) alpha0> in the discretization of the solve
/// (<alpha0, (-Delta + E0) alpha0> for synthetic input).
double relative_form(const TwoBodySolution &sol);

/// (-Delta + E0) f with the fourth-order radial Laplacian.
RadialFunction shifted_kinetic(const RadialFunction &f, double E0);

/// Depth of the Gaussian well -V0 exp(-r^2/width^2) whose discrete ground
/// state has binding energy `target_E0` on the grid selected by `spec`.
Interaction tune_gaussian_well(double target_E0, double width,
                               const GridSpec &spec = {});

struct TwoBodyOptions {
  GridSpec grid{};
  double epsilon{0.5};
  int l_max{4};
  double beta{2.0};
  bool require_gap{true};
};

/// Full pipeline: ground state, momentum representation, gap, decay, moments.
TwoBodySolution solve_two_body(const Interaction &V, const TwoBodyOptions &opt = {},
                               Diagnostics *diag = nullptr);

/// A two-body record built from a given (synthetic) alpha0 and E0 instead of
/// an interaction; V is left empty and kinetic_alpha0 uses the Laplacian.
TwoBodySolution synthetic_two_body(const RadialFunction &alpha0, double E0,
                                   Diagnostics *diag = nullptr);

} // namespace bcsgp::twobody
