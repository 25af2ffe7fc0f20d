#pragma once

#include <cmath>
#include <cstddef>

namespace gatebound::numerics {

struct Minimum {
  double x;
  double value;
  std::size_t iterations;
};

/// Golden-section search for a unimodal f on [lo, hi]; stops once the bracket
/// is narrower than x_tol.
template <class F>
Minimum golden_section(const F& f, double lo, double hi, double x_tol = 1e-10,
                       std::size_t max_iter = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  std::size_t it = 0;
  while (b - a > x_tol && it < max_iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

} // namespace gatebound::numerics
