#pragma once
#include <functional>

namespace bcsgp::numerics {

struct RootResult {
  double root;
  double lo, hi; ///< final bracket
  int evaluations;
};

/// Root of a scalar function that changes sign on [a, b], located with
/// TOMS 748 (bracketing, superlinear, never leaves the bracket). Stops when the
/// bracket is narrower than tol * max(1, |x|) or fn vanishes exactly.
/// Throws DomainError when fn(a) and fn(b) have the same strict sign.
RootResult find_root_scalar(const std::function<double(double)> &fn, double a,
                            double b, double tol = 1e-12, int max_evals = 200);

} // namespace bcsgp::numerics
