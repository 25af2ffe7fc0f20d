#include "gatebound/numerics/ode.hpp"

#include "gatebound/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gatebound::numerics {
namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b*, the embedded fourth-order difference.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace

OdeResult integrate_dopri5(const OdeRhs& rhs, OdeState y0, double t0, double t1,
                           const OdeOptions& opts) {
  const std::size_t n = y0.size();
  OdeResult out;
  const double span = t1 - t0;
  if (span <= 0.0) {
    out.y = std::move(y0);
    return out;
  }
  double h = opts.initial_step > 0.0 ? opts.initial_step : span / 1000.0;
  const double h_min = opts.min_step > 0.0 ? opts.min_step : 1e-14 * span;

  OdeState y = std::move(y0);
  OdeState k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  rhs(t0, y, k1);
  double t = t0;
  double last_ratio = 0.0;

  while (t < t1) {
    if (out.accepted + out.rejected >= opts.max_steps) {
      std::ostringstream msg;
      msg << "dopri5: exceeded " << opts.max_steps << " steps at t=" << t << " (h=" << h << ")";
      throw IntegrationFailure(msg.str());
    }
    const bool last = t + h >= t1;
    if (last) {
      h = t1 - t;
    }
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, y_new, k7);

    double ratio = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double err =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      ratio = std::max(ratio, std::abs(err) / scale);
    }
    last_ratio = ratio;

    if (ratio <= 1.0) {
      t = last ? t1 : t + h;
      y.swap(y_new);
      k1.swap(k7);
      ++out.accepted;
      out.last_step = h;
      const double grow = ratio == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(ratio, -0.2));
      h *= grow;
    } else {
      ++out.rejected;
      h *= std::max(0.1, 0.9 * std::pow(ratio, -0.2));
      if (h < h_min) {
        std::ostringstream msg;
        msg << "dopri5: step size underflow at t=" << t << " (h=" << h
            << ", error ratio=" << last_ratio << "); likely a stiff close encounter";
        throw IntegrationFailure(msg.str());
      }
    }
  }
  out.y = std::move(y);
  return out;
}

} // namespace gatebound::numerics
