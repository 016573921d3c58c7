#pragma once
#include "bcsgp/numerics/errors.hpp"
#include "bcsgp/numerics/model.hpp"
#include "bcsgp/numerics/radial_function.hpp"
#include <optional>
#include <vector>

namespace bcsgp::gp {

using numerics::GridPtr;
using numerics::RadialFunction;
using numerics::Trap;

/// Default macroscopic grid: uniform, r_max = 8, spacing 1e-3.
GridPtr default_trap_grid();

struct TrapGround {
  double E_W;
  RadialFunction psi_W;
  double residual;
};

/// Ground state of -1/4 Delta + W.
TrapGround solve_trap_ground(const Trap &W, const GridPtr &grid);

/// Norms entering the a-priori bound and the reports.
struct FieldNorms {
  double l2_sq;   ///< ||psi||_2^2
  double l4_4;    ///< ||psi||_4^4
  double grad_sq; ///< ||grad psi||_2^2
  double trap;    ///< <psi|W|psi>
};
FieldNorms field_norms(const RadialFunction &psi, const Trap &W);

/// int 1/4 |grad psi|^2 + (W - D)|psi|^2 + g |psi|^4.
double gp_energy(const RadialFunction &psi, const Trap &W, double D, double g);

/// L^2 gradient field -1/4 Delta psi + (W - D) psi + 2 g |psi|^2 psi.
/// The directional derivative of gp_energy along phi is 2 <gradient, phi>.
RadialFunction gp_gradient(const RadialFunction &psi, const Trap &W, double D,
                           double g);

struct GLSplit {
  double N{0.0};
  RadialFunction f0;
  double mu0{0.0};
  RadialFunction phi;
  double E_tilde{0.0};
  double E_gl{0.0};
  double identity_residual{0.0};
};

struct GPOptions {
  double grad_tol{1e-8};
  double stagnation_tol{1e-12};
  int stagnation_window{50};
  int max_iterations{500};
};

struct GPResult {
  RadialFunction psi_star;
  double energy{0.0};
  double grad_residual{0.0};
  double D{0.0};
  double g_bcs{0.0};
  double E_W{0.0};
  RadialFunction psi_W;
  bool converged{false};
  int iterations{0};
  std::vector<double> energy_history;
  std::optional<GLSplit> gl_split;
};

/// Minimizes the grand-canonical functional over radial nonnegative psi.
/// Returns psi = 0 when D <= E_W. A run that hits the iteration cap returns the
/// best iterate with converged = false.
GPResult minimize_gp_unconstrained(const Trap &W, double D, double g_bcs,
                                   const GridPtr &grid, const GPOptions &opt = {},
                                   const RadialFunction *init = nullptr,
                                   Diagnostics *diag = nullptr);

struct ConstrainedResult {
  RadialFunction f0;
  double E_tilde;   ///< int 1/4|grad f0|^2 + W f0^2 + gN f0^4
  double mu0;       ///< E_tilde + gN ||f0||_4^4
  double multiplier; ///< Lagrange multiplier from the solver
  double residual;  ///< ||-1/4 Delta f0 + W f0 + 2gN f0^3 - mu0 f0||_2
  int iterations;
};

/// Minimizes int 1/4|grad f|^2 + W f^2 + g N f^4 subject to ||f||_2 = 1.
ConstrainedResult minimize_gp_constrained(const Trap &W, double g_bcs, double N,
                                          const GridPtr &grid,
                                          Diagnostics *diag = nullptr);

/// psi* = sqrt(N) f0 phi and the weighted GL energy of phi.
GLSplit gl_split(const GPResult &result, const Trap &W, Diagnostics *diag = nullptr);

struct AprioriReport {
  double lhs;       ///< ||grad psi||^2 + <W> + ||psi||_4^4 + ||psi||_2^2
  double energy;    ///< E^GP_D(psi)
  double ratio;     ///< lhs / max(energy, 0), infinite when energy <= 0 < lhs
  double trivial_constant; ///< max(4, 1/|D|, 1/g) for D < 0, else NaN
  bool trivial_bound_holds;
};
AprioriReport apriori_bounds_check(const RadialFunction &psi, double D, double g_bcs,
                                   const Trap &W);

} // namespace bcsgp::gp
