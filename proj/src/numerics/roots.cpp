#include "bcsgp/numerics/roots.hpp"
#include "bcsgp/numerics/errors.hpp"
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <sstream>

namespace bcsgp::numerics {

RootResult find_root_scalar(const std::function<double(double)> &fn, double a,
                            double b, double tol, int max_evals) {
  if (a > b)
    std::swap(a, b);
  const double fa = fn(a), fb = fn(b);
  if (fa == 0.0)
    return {a, a, a, 2};
  if (fb == 0.0)
    return {b, b, b, 2};
  if (std::signbit(fa) == std::signbit(fb)) {
    std::ostringstream os;
    os << "find_root_scalar: no sign change on [" << a << ", " << b
       << "] (f = " << fa << ", " << fb << ")";
    throw DomainError(os.str());
  }
  auto done = [tol](double lo, double hi) {
    return std::abs(hi - lo) <= tol * std::max(1.0, std::abs(0.5 * (lo + hi)));
  };
  boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_evals);
  const auto [lo, hi] =
      boost::math::tools::toms748_solve(fn, a, b, fa, fb, done, iters);
  const double flo = fn(lo), fhi = fn(hi);
  const double root = std::abs(flo) <= std::abs(fhi) ? lo : hi;
  if (!done(lo, hi) && flo != 0.0 && fhi != 0.0)
    throw ConvergenceError("find_root_scalar: evaluation budget exhausted",
                           std::abs(hi - lo));
  return {root, lo, hi, static_cast<int>(iters) + 4};
}

} // namespace bcsgp::numerics
