#pragma once

#include "gatebound/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace gatebound::collision::detail {

/// Integrals here are compared at 1e-9 or tighter, and in SI units their
/// magnitudes are far below any fixed absolute tolerance.
inline numerics::QuadOptions tight() { return {0.0, 1e-13, 20000}; }

/// int_0^inf f(y) dy with y = scale * tan(theta) and theta = pi/2 - phi^2.
/// The extra grading keeps slowly decaying power laws (rho^-n, 1 < n < 2)
/// smooth at the far end, where the plain tangent map leaves cos^{n-2}.
template <class F>
double half_line_integral(const F& f, double scale) {
  auto g = [&](double phi) {
    if (phi <= 0.0) return 0.0;
    const double u = phi * phi;
    const double s = std::sin(u);
    return f(scale * std::cos(u) / s) * scale / (s * s) * 2.0 * phi;
  };
  return numerics::integrate<double>(g, 0.0, std::sqrt(std::numbers::pi / 2.0), tight()).value;
}

} // namespace gatebound::collision::detail
