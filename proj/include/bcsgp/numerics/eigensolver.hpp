#pragma once
#include "bcsgp/numerics/radial_function.hpp"
#include <span>
#include <vector>

namespace bcsgp::numerics {

/// Second-order finite-difference discretization of
///   -a d^2/dr^2 + P(r) + a l(l+1)/r^2   acting on u = r f,
/// with u(0) = u(r_max) = 0. The unknowns are u at nodes 1..n-1. The mass
/// matrix is the diagonal of line weights, so that 4 pi u^T M u = ||f||_2^2.
class RadialOperator {
public:
  RadialOperator(GridPtr grid, double kinetic_factor, int ell,
                 std::span<const double> potential);

  std::size_t unknowns() const { return m_mass.size(); }
  const GridPtr &grid_ptr() const { return m_grid; }
  double kinetic_factor() const { return m_a; }
  int ell() const { return m_ell; }
  std::span<const double> mass() const { return m_mass; }
  /// 1/h_j for edge j between unknown j-1 and j (unknown -1 is the origin,
  /// unknown m is the Dirichlet node at r_max); m+1 entries.
  std::span<const double> inverse_edges() const { return m_inv_edge; }
  /// Potential plus centrifugal term at the unknowns.
  std::span<const double> diagonal_potential() const { return m_pot; }

  /// Symmetrized tridiagonal A = M^{-1/2}(aK)M^{-1/2} + diag(P).
  std::span<const double> sym_diag() const { return m_d; }
  std::span<const double> sym_off() const { return m_e; }

  /// u^T K u (stiffness form, no kinetic factor) for u on the unknowns.
  double stiffness_form(std::span<const double> u) const;
  /// (K u)_i for u on the unknowns.
  std::vector<double> stiffness_apply(std::span<const double> u) const;

  /// u-vector (on the unknowns) of a radial function on the same grid.
  std::vector<double> to_u(const RadialFunction &f) const;
  /// Radial function f = u/r, zero at r_max.
  RadialFunction from_u(std::span<const double> u) const;

private:
  GridPtr m_grid;
  double m_a;
  int m_ell;
  std::vector<double> m_mass, m_inv_edge, m_pot, m_d, m_e;
};

struct EigenPair {
  double energy;
  RadialFunction f;
  /// ||(H - E) f||_2 of the discrete problem.
  double residual;
};

/// The k lowest eigenpairs of -a Delta + potential in the angular-momentum
/// sector ell. `potential` holds values at the grid nodes (the value at r_max
/// is unused). Eigenfunctions are L^2(R^3)-normalized with a positive
/// dominant lobe.
std::vector<EigenPair> radial_eigensolve(std::span<const double> potential,
                                         double kinetic_factor, int ell,
                                         const GridPtr &grid, std::size_t k,
                                         double tol = 1e-8);
std::vector<EigenPair> radial_eigensolve(const RadialFunction &potential,
                                         double kinetic_factor, int ell,
                                         std::size_t k, double tol = 1e-8);

/// The k lowest eigenvalues of a symmetric tridiagonal matrix.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> off,
                                            std::size_t k);

/// Solve (T) x = b for a general tridiagonal T given by its three diagonals
/// (sub and sup have one entry fewer). Returns false when T is singular.
bool tridiagonal_solve(std::vector<double> sub, std::vector<double> diag,
                       std::vector<double> sup, std::vector<double> &rhs);

/// Solve T x = b for symmetric positive definite tridiagonal T. Returns false
/// when T is not positive definite.
bool spd_tridiagonal_solve(std::vector<double> diag, std::vector<double> off,
                           std::vector<double> &rhs);

} // namespace bcsgp::numerics
