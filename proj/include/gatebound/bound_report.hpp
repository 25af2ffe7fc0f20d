#pragma once

#include <map>
#include <optional>
#include <string>

namespace gatebound {

/// Common result of every energy-bound check. Energies and bounds share the
/// unit system of the inputs (hbar = 1 in natural units, J in SI).
struct BoundReport {
  double phase = 0.0;                  // accumulated gate phase, target pi
  double error = 0.0;                  // fluctuation variance delta^2, compared to epsilon
  std::optional<double> photon_number; // field studies only
  std::optional<double> mean_omega;    // photon-weighted mean frequency
  double energy = 0.0;
  double bound = 0.0;
  double epsilon = 0.0;
  bool satisfied = false;   // energy >= bound
  bool premise_met = false; // error <= epsilon; the bound says nothing otherwise
  bool calibrated = false;  // phase matches pi within the study's tolerance
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> notes;

  double ratio() const { return bound > 0.0 ? energy / bound : 0.0; }
};

} // namespace gatebound
