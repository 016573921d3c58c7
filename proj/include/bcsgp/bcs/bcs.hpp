#pragma once
#include "bcsgp/numerics/errors.hpp"
#include "bcsgp/numerics/model.hpp"
#include "bcsgp/numerics/radial_function.hpp"
#include "bcsgp/twobody/twobody.hpp"
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace bcsgp::bcs {

using numerics::RadialFunction;
using numerics::Trap;
using twobody::TwoBodySolution;
using Vec3 = std::array<double, 3>;

/// Synthetic remainder r(x, y) = chi((x+y)/2) rho((x-y)/h); chi lives on the
/// grid of psi and rho on the grid of alpha0.
struct Remainder {
  RadialFunction chi;
  RadialFunction rho;
};

/// alpha(x, y) = h^-2 psi((x+y)/2) alpha0((x-y)/h) [+ r(x, y)].
struct PairKernel {
  RadialFunction psi;
  std::shared_ptr<const TwoBodySolution> sol;
  double h{0.0};
  std::optional<Remainder> remainder;

  const RadialFunction &alpha0() const { return sol->alpha0; }
  /// ||alpha||_{S^2}^2 of the psi part, h^-1 ||psi||_2^2 ||alpha0||_2^2.
  double hs_norm_sq() const;
  double operator()(const Vec3 &x, const Vec3 &y) const;
  bool is_zero() const { return psi.max_abs() == 0.0; }
};

PairKernel build_pair_kernel(const RadialFunction &psi,
                             std::shared_ptr<const TwoBodySolution> sol, double h,
                             Diagnostics *diag = nullptr);

/// Rotation-invariant kernel K(x, y) = F(|x|, |y|, |x - y|) discretized per
/// angular momentum sector by a symmetric Nystrom matrix.
struct KernelDiscretization {
  double r_max;          ///< support radius in |x|, |y|
  double rho_max;        ///< F vanishes for |x - y| > rho_max
  double r_panel;        ///< Gauss-Legendre panel width in r
  double rho_panel;      ///< panel width in |x - y|
  int order{8};
};

/// Eigenvalues (signed) of the symmetric sector matrices for l = 0..l_max.
std::vector<std::vector<double>>
radial_kernel_spectrum(const std::function<double(double, double, double)> &F,
                       const KernelDiscretization &disc, int l_max);

KernelDiscretization default_discretization(const PairKernel &k);

/// ||alpha||_{S^2}^2 by direct quadrature over (|x|, |y|, |x - y|) on
/// [0, R]^2, independent of the Nystrom discretization.
double hs_norm_sq_by_quadrature(const PairKernel &k, double R);

/// Largest singular value of alpha_psi (sectors l <= 2).
double top_singular_value(const PairKernel &k, Diagnostics *diag = nullptr);

struct SchattenValue {
  int n;
  double value;      ///< ||alpha||_{S^n}^n
  double tail_bound; ///< bound on the omitted part of the sum
  double ratio;      ///< value / (h^{n-3} ||psi||_n^n ||alpha0^||_n^n)
};
struct SchattenReport {
  std::vector<SchattenValue> values;
  int l_max;
  double hs_exact;     ///< h^-1 ||psi||^2
  double hs_computed;  ///< sum over the computed spectrum
};
SchattenReport schatten_norms(const PairKernel &k, const std::vector<int> &ns,
                              Diagnostics *diag = nullptr);

/// No lambda makes the trial state admissible.
class Inadmissible : public DomainError {
public:
  using DomainError::DomainError;
};

/// p = lambda h - (1 + lambda h)^2 s^4 - 2 (1 + lambda h) s^2.
double admissibility_polynomial(double lambda, double h, double s1);

/// Smallest lambda in [0, cap] with p >= delta at s = s1.
double admissibility_lambda(double s1, double h, double delta, double cap = 1e6);

struct TrialState {
  PairKernel kernel;
  double lambda{0.0};
  double s1{0.0};
  double delta{0.0};
  double margin{0.0}; ///< p at the chosen lambda
};

TrialState make_trial_state(const PairKernel &k, double delta = 1e-9,
                            std::optional<double> s1 = std::nullopt,
                            Diagnostics *diag = nullptr);

struct QuadraticTerms {
  double com_kinetic;       ///< h/4 ||grad psi||^2
  double relative_residual; ///< <alpha~|-h^2 Delta + V(./h) + E0|alpha~>
  double w_term;            ///< h^2 tr W alpha alpha*
  double d_term;            ///< -h^2 D ||alpha||_{S^2}^2
  double total;
};
QuadraticTerms quadratic_energy(const PairKernel &k, const Trap &W, double D);

struct Estimate {
  double mean{0.0};
  double stderr_{0.0};
};

struct MCOptions {
  std::uint64_t samples{1000000};
  std::uint64_t seed{1};
  int threads{1};
  std::uint64_t block{1u << 15};
};

struct QuarticTraces {
  Estimate kinetic; ///< tr (-h^2 Delta + E0)(alpha alpha*)^2
  Estimate trap;    ///< tr W (alpha alpha*)^2
  Estimate plain;   ///< tr (alpha alpha*)^2
  Estimate hbar;    ///< kinetic + h^2 trap - D h^2 plain
  std::uint64_t samples{0};
};

QuarticTraces quartic_trace_mc(const PairKernel &k, const Trap &W, double D,
                               const MCOptions &opt, Diagnostics *diag = nullptr);

struct EnergyBreakdown {
  double h{0.0};
  double lambda{0.0};
  double s1{0.0};
  QuadraticTerms quad{};
  QuarticTraces quartic{};
  Estimate total_bcs;        ///< quad + (1 + lambda h) tr hbar (alpha alpha*)^2
  double gp_reference{0.0};  ///< h E^GP_D(psi)
  double A0{0.0};            ///< ||W |psi|^2||_1 + ||psi||_2^2
  Estimate quartic_residual; ///< (kinetic - h g ||psi||_4^4) / h^2
  Estimate reduction_slack;  ///< lambda h tr hbar (alpha alpha*)^2
};

EnergyBreakdown trial_bcs_energy(const TrialState &t, const Trap &W, double D,
                                 double g_bcs, const MCOptions &opt,
                                 Diagnostics *diag = nullptr);

struct Decomposition {
  RadialFunction psi_recovered;
  double alpha_norm_sq;     ///< ||alpha||_{S^2}^2
  double psi_part_norm_sq;  ///< h^-1 ||psi_recovered||^2
  double remainder_norm_sq; ///< ||r||_{S^2}^2 after projection
  double orthogonality_defect; ///< max_eta |<alpha0(./h), r~(eta, .)>|
  double input_defect;      ///< <alpha0, rho> of the input remainder
  double pythagoras_residual; ///< relative
  double psi_error;         ///< ||psi_recovered - psi||_2 / ||psi||_2
};

Decomposition decompose_alpha(const PairKernel &k, Diagnostics *diag = nullptr);

} // namespace bcsgp::bcs
