#include "gatebound/pulse/pulse.hpp"

#include "gatebound/error.hpp"
#include "gatebound/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gatebound::pulse {

void validate(const PulseSpec& pulse) {
  if (!(pulse.t_end > pulse.t_start)) {
    throw ValidationError("pulse window needs t_end > t_start");
  }
  for (std::size_t k = 0; k < pulse.modes.size(); ++k) {
    if (!(pulse.modes[k].omega > 0.0)) {
      std::ostringstream msg;
      msg << "pulse mode " << k << " has omega = " << pulse.modes[k].omega << " (must be > 0)";
      throw ValidationError(msg.str());
    }
  }
}

cplx mode_integral(double omega, double t_start, double t_end) {
  // (e^{-i w t1} - e^{-i w t0}) / (-i w), written around the midpoint so
  // that small w (t1 - t0) does not cancel.
  const double mid = 0.5 * (t_start + t_end);
  const double half = 0.5 * (t_end - t_start);
  return std::polar(2.0 * std::sin(omega * half) / omega, -omega * mid);
}

double phase_accumulated(const PulseSpec& pulse) {
  double phase = 0.0;
  for (const auto& m : pulse.modes) {
    phase += 2.0 * (m.g * m.alpha * mode_integral(m.omega, pulse.t_start, pulse.t_end)).real();
  }
  return phase;
}

double quantum_error(const PulseSpec& pulse) {
  double err = 0.0;
  for (const auto& m : pulse.modes) {
    err += std::norm(m.g * mode_integral(m.omega, pulse.t_start, pulse.t_end));
  }
  return err;
}

double photon_number(const PulseSpec& pulse) {
  double n = 0.0;
  for (const auto& m : pulse.modes) n += std::norm(m.alpha);
  return n;
}

double mean_omega(const PulseSpec& pulse) {
  if (pulse.modes.empty()) return 0.0;
  double weighted = 0.0, n = 0.0, plain = 0.0;
  for (const auto& m : pulse.modes) {
    weighted += m.omega * std::norm(m.alpha);
    n += std::norm(m.alpha);
    plain += m.omega;
  }
  if (n == 0.0) return plain / static_cast<double>(pulse.modes.size());
  // Clamp against rounding so the mean stays inside [min, max].
  auto [lo, hi] = std::minmax_element(pulse.modes.begin(), pulse.modes.end(),
                                      [](const Mode& a, const Mode& b) { return a.omega < b.omega; });
  return std::clamp(weighted / n, lo->omega, hi->omega);
}

double field_energy(const PulseSpec& pulse, double hbar) {
  double e = 0.0;
  for (const auto& m : pulse.modes) e += hbar * m.omega * std::norm(m.alpha);
  return e;
}

double min_photon_number(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("min_photon_number: epsilon must lie in (0, 1)");
  }
  return pi * pi / (4.0 * epsilon);
}

BoundReport energy_bound_check(const PulseSpec& pulse, double epsilon, double hbar) {
  validate(pulse);
  if (!(epsilon > 0.0)) throw ValidationError("energy_bound_check: epsilon must be > 0");
  BoundReport r;
  r.epsilon = epsilon;
  r.phase = phase_accumulated(pulse);
  r.error = quantum_error(pulse);
  r.photon_number = photon_number(pulse);
  r.mean_omega = mean_omega(pulse);
  r.energy = field_energy(pulse, hbar);
  r.bound = pi * pi / 4.0 * hbar * *r.mean_omega / epsilon;
  r.calibrated = std::abs(r.phase - pi) <= phase_tolerance;
  r.premise_met = r.error <= epsilon * (1.0 + premise_slack);
  r.satisfied = r.energy >= r.bound * (1.0 - bound_slack);
  r.metrics["min_photon_number"] = pi * pi / (4.0 * epsilon);
  r.metrics["photon_error_product"] = *r.photon_number * r.error;
  if (!r.premise_met) r.notes["bound"] = "error exceeds epsilon; bound not required";
  if (!r.calibrated) r.notes["phase"] = "off calibration: phase differs from pi";
  return r;
}

PulseSpec equality_pulse(double omega, double epsilon, double t_start, double t_end) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("equality_pulse: epsilon must lie in (0, 1)");
  }
  PulseSpec p{{}, t_start, t_end};
  const cplx j = mode_integral(omega, t_start, t_end);
  if (std::abs(j) == 0.0) {
    throw DegenerateConfigurationError("equality_pulse: mode integral vanishes on this window");
  }
  Mode m;
  m.omega = omega;
  m.g = std::sqrt(epsilon) / j; // g J = sqrt(epsilon), real and positive
  m.alpha = pi / (2.0 * std::sqrt(epsilon));
  p.modes.push_back(m);
  validate(p);
  return p;
}

} // namespace gatebound::pulse
