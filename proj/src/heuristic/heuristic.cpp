#include "gatebound/heuristic/heuristic.hpp"

#include "gatebound/error.hpp"
#include "gatebound/units.hpp"

#include <cmath>
#include <sstream>

namespace gatebound::heuristic {

void validate(const HeuristicConfig& cfg, double hbar) {
  if (!(cfg.m > 0.0 && cfg.L > 0.0 && cfg.T > 0.0)) {
    throw ValidationError("heuristic: m, L, T must be positive");
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw ValidationError("heuristic: epsilon must lie in (0, 1)");
  }
  if (cfg.dx.has_value() != cfg.dp.has_value()) {
    throw ValidationError("heuristic: give both dx and dp, or neither");
  }
  if (cfg.dx) {
    if (!(*cfg.dx > 0.0 && *cfg.dp > 0.0)) {
      throw ValidationError("heuristic: dx and dp must be positive");
    }
    if (*cfg.dx * *cfg.dp < 0.5 * hbar * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "heuristic: dx dp = " << *cfg.dx * *cfg.dp << " below hbar/2 = " << 0.5 * hbar;
      throw UncertaintyViolationError(msg.str());
    }
  }
}

Displacement displacement_estimates(const HeuristicConfig& cfg, double hbar) {
  validate(cfg, hbar);
  const double force = pi * hbar / (cfg.L * cfg.T);
  return {force * cfg.T * cfg.T / (2.0 * cfg.m), force * cfg.T};
}

Widths optimal_widths(double m, double T, double hbar) {
  if (!(m > 0.0 && T > 0.0)) throw ValidationError("optimal_widths: m and T must be > 0");
  const double dx = std::sqrt(hbar * T / (4.0 * m));
  return {dx, 0.5 * hbar / dx};
}

double misoverlap(const HeuristicConfig& cfg, double hbar) {
  const auto d = displacement_estimates(cfg, hbar);
  const Widths w = cfg.dx ? Widths{*cfg.dx, *cfg.dp} : optimal_widths(cfg.m, cfg.T, hbar);
  const double rx = d.delta_x / w.dx;
  const double rp = d.delta_p / w.dp;
  return rx * rx + rp * rp;
}

BoundReport heuristic_energy_bound(const HeuristicConfig& cfg, double hbar) {
  validate(cfg, hbar);
  HeuristicConfig optimal = cfg;
  optimal.dx.reset();
  optimal.dp.reset();
  const double v = cfg.L / cfg.T;

  BoundReport r;
  r.epsilon = cfg.epsilon;
  r.phase = pi;
  r.calibrated = true;
  r.error = misoverlap(optimal, hbar);
  r.energy = 0.5 * cfg.m * v * v;
  r.bound = pi * pi * hbar / (cfg.epsilon * cfg.T);
  r.premise_met = r.error <= cfg.epsilon;
  r.satisfied = r.energy >= r.bound * (1.0 - 1e-12);
  r.metrics["misoverlap_closed_form"] = 2.0 * pi * pi * hbar * cfg.T / (cfg.m * cfg.L * cfg.L);
  r.metrics["bound_printed"] = pi * pi * hbar / cfg.T;
  if (cfg.dx) r.metrics["misoverlap_configured"] = misoverlap(cfg, hbar);
  r.notes["bound"] =
      "pi^2 hbar / (epsilon T) follows from 2 pi^2 hbar T / (m L^2) < epsilon with v = L/T; "
      "the epsilon-free printed form is bound_printed";
  return r;
}

} // namespace gatebound::heuristic
