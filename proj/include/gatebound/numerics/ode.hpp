#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gatebound::numerics {

using OdeState = std::vector<double>;
/// dy/dt = rhs(t, y); writes into dydt (same size as y).
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dydt)>;

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0; // 0 picks span/1000
  double min_step = 0.0;     // 0 picks 1e-14 * span
  std::size_t max_steps = 5'000'000;
};

struct OdeResult {
  OdeState y;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double last_step = 0.0;
};

/// Dormand-Prince 5(4) with FSAL and a standard PI-free step controller.
/// Integrates from t0 to t1 (t1 > t0). Throws IntegrationFailure on step-size
/// underflow or when max_steps is exceeded; the message names the failing
/// step and its error ratio.
OdeResult integrate_dopri5(const OdeRhs& rhs, OdeState y0, double t0, double t1,
                           const OdeOptions& opts = {});

} // namespace gatebound::numerics
