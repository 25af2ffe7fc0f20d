#include "gatebound/pulse/pulse.hpp"

#include "gatebound/error.hpp"
#include "gatebound/numerics/minimize.hpp"

#include <cmath>

namespace gatebound::pulse {

double squeezed_energy(double r, double epsilon, double omega, double hbar) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ValidationError("squeezed_energy: epsilon must lie in (0, 1]");
  }
  if (!(omega > 0.0)) throw ValidationError("squeezed_energy: omega must be > 0");
  const double x = std::exp(2.0 * r);
  return hbar * omega * (1.0 / (x * epsilon) + x);
}

SqueezingOptimum optimize_squeezing(double epsilon, double omega, double hbar) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ValidationError("optimize_squeezing: epsilon must lie in (0, 1]");
  }
  if (!(omega > 0.0)) throw ValidationError("optimize_squeezing: omega must be > 0");
  SqueezingOptimum out;
  out.r_star = -std::log(epsilon) / 4.0;
  out.e_min = 2.0 * hbar * omega / std::sqrt(epsilon);
  auto f = [&](double r) { return squeezed_energy(r, epsilon, omega, hbar); };
  const auto m = numerics::golden_section(f, 0.0, -std::log(epsilon), 1e-11);
  out.r_numeric = m.x;
  out.e_numeric = m.value;
  out.relative_disagreement = std::abs(m.value - out.e_min) / out.e_min;
  return out;
}

LinewidthBound linewidth_combined_bound(double duration, double epsilon, double hbar) {
  if (!(duration > 0.0)) throw ValidationError("linewidth_combined_bound: T must be > 0");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ValidationError("linewidth_combined_bound: epsilon must lie in (0, 1]");
  }
  LinewidthBound out;
  out.omega_min = 1.0 / (duration * std::sqrt(epsilon));
  // 2 hbar omega_min / sqrt(epsilon)
  out.derived_bound = 2.0 * hbar / (epsilon * duration);
  out.quoted_bound = hbar / (epsilon * duration);
  return out;
}

} // namespace gatebound::pulse
