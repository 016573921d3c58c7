#pragma once
#include "bcsgp/numerics/errors.hpp"
#include "bcsgp/numerics/radial_function.hpp"

namespace bcsgp::numerics {

/// Unitary Fourier transform of a radial function,
///   f^(p) = (2 pi)^{-3/2} int e^{-i p.x} f(|x|) dx
///         = sqrt(2/pi) p^{-1} int_0^inf r sin(p r) f(r) dr.
///
/// When f lives on a uniform grid and `p_grid` is its dual grid the transform
/// is a discrete sine transform (exactly unitary, and its own inverse); other
/// momentum grids use direct summation with the p -> 0 limit taken
/// analytically. A warning is emitted when f has not decayed at r_max.
RadialFunction radial_fourier(const RadialFunction &f, const GridPtr &p_grid,
                              Diagnostics *diag = nullptr);

/// Tail size |f| near r_max relative to max |f|.
double tail_ratio(const RadialFunction &f);

} // namespace bcsgp::numerics
