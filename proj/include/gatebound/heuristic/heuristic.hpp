#pragma once

// Back-of-envelope version of the collision bound: a force of order
// pi hbar / (L T) acting for T displaces the wavepacket, and the displacement
// must stay inside the packet's own width.

#include "gatebound/bound_report.hpp"

#include <optional>

namespace gatebound::heuristic {

struct HeuristicConfig {
  double m = 1.0;
  double L = 1.0; // length traversed during T
  double T = 1.0;
  double epsilon = 0.01;
  std::optional<double> dx; // explicit wavepacket widths; default optimal
  std::optional<double> dp;
};

/// Throws ValidationError on non-positive fields or epsilon outside (0, 1),
/// UncertaintyViolationError when explicit dx dp < hbar/2.
void validate(const HeuristicConfig& cfg, double hbar = 1.0);

struct Displacement {
  double delta_x = 0.0; // pi hbar T / (2 m L)
  double delta_p = 0.0; // pi hbar / L
};
Displacement displacement_estimates(const HeuristicConfig& cfg, double hbar = 1.0);

struct Widths {
  double dx = 0.0;
  double dp = 0.0;
};
/// Minimizer of the mis-overlap on dx dp = hbar/2: dx^2 = hbar T / 4m.
Widths optimal_widths(double m, double T, double hbar = 1.0);

/// (delta_x/dx)^2 + (delta_p/dp)^2 with the configured (or optimal) widths.
double misoverlap(const HeuristicConfig& cfg, double hbar = 1.0);

/// energy = m v^2 / 2 with v = L/T, bound = pi^2 hbar / (epsilon T);
/// satisfied when the optimal mis-overlap is within epsilon.
BoundReport heuristic_energy_bound(const HeuristicConfig& cfg, double hbar = 1.0);

} // namespace gatebound::heuristic
