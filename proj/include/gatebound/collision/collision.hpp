#pragma once

// Collision-mediated gates: straight-line "free" collisions and particles
// swinging toward each other in harmonic traps. Semiclassical moments only;
// the wavepackets are never propagated.

#include "gatebound/bound_report.hpp"

#include <cstddef>
#include <functional>
#include <optional>

namespace gatebound::collision {

/// V(rho) = coupling * shape(rho). For a power law shape(rho) = rho^-n.
class PotentialLaw {
public:
  static PotentialLaw power_law(double n, double coupling);
  /// shape and its derivative; must decay to zero at large rho.
  static PotentialLaw custom(std::function<double(double)> shape,
                             std::function<double(double)> shape_derivative,
                             double coupling = 1.0);

  double value(double rho) const;
  double derivative(double rho) const;
  double coupling() const { return coupling_; }
  PotentialLaw with_coupling(double c) const;
  /// Power-law exponent, empty for custom shapes.
  std::optional<double> exponent() const { return n_; }

  /// Throws ValidationError unless |V(1e6 b)| < 1e-8 |V(b)|.
  void check_decay(double b) const;

private:
  PotentialLaw() = default;
  std::optional<double> n_;
  std::function<double(double)> shape_;
  std::function<double(double)> shape_derivative_;
  double coupling_ = 1.0;
};

struct FreeCollisionConfig {
  double m = 1.0; // per-particle mass
  double v = 1.0; // transverse speed of each particle in the CM frame
  double b = 1.0; // distance of closest approach
  double T = 1.0; // interaction window, t in [-T/2, T/2]
  PotentialLaw potential = PotentialLaw::power_law(2.0, 1.0);
};

/// Throws ValidationError unless all fields are positive and b < v T.
void validate(const FreeCollisionConfig& cfg);

/// (1/hbar) int_{-T/2}^{T/2} V(sqrt(4 v^2 t^2 + b^2)) dt. With use_symmetry the
/// half window [0, T/2] is integrated and doubled.
double phase_integral_free(const FreeCollisionConfig& cfg, double hbar = 1.0,
                           bool use_symmetry = true);

/// Coupling C* that makes the phase exactly pi (phase is linear in C).
double calibrate_coupling(const FreeCollisionConfig& cfg, double hbar = 1.0);

/// int (dV/drho) dt / rho over the window.
double force_integral_free(const FreeCollisionConfig& cfg, bool use_symmetry = true);

/// delta^2 = (b/hbar)^2 (int V' dt/rho)^2 (dx0^2 + T^2 dp0^2 / 4m^2).
/// Throws UncertaintyViolationError when dx0 dp0 < hbar/2.
double error_variance_free(const FreeCollisionConfig& cfg, double dx0, double dp0,
                           double hbar = 1.0);

struct Wavepacket {
  double dx0_sq = 0.0;
  double dp0_sq = 0.0;
  double objective = 0.0; // dx0^2 + T^2 dp0^2 / 4m^2 at the optimum
};

/// Minimizer of dx0^2 + T^2 dp0^2/(4 m^2) under dx0 dp0 = hbar/2:
/// dx0^2 = T hbar/4m, dp0^2 = m hbar/T, objective T hbar/2m.
Wavepacket optimal_wavepacket(double m, double T, double hbar = 1.0);

/// d/db ln int_{-inf}^{inf} (y^2 + b^2)^{-n/2} dy. Returns the analytic
/// -(n-1)/b after checking it against a central difference of the quadrature
/// (relative 1e-6); throws NumericalInconsistencyError if they disagree.
double powerlaw_log_derivative(double n, double b);

struct LogDerivativeCheck {
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_difference = 0.0;
};
LogDerivativeCheck powerlaw_log_derivative_check(double n, double b);

/// Calibrates the coupling, then reports error = (pi^2 T hbar / 2m)((n-1)/b)^2,
/// energy = m v^2, bound = hbar/(epsilon T). The finite-window quadrature
/// value of delta^2 is kept in metrics["error_finite_window"].
BoundReport free_energy_bound(const FreeCollisionConfig& cfg, double epsilon, double hbar = 1.0);

struct HarmonicCollisionConfig {
  double m = 1.0;
  double omega = 1.0;
  double A = 1.0;
  double b = 0.05;
  PotentialLaw potential = PotentialLaw::power_law(3.0, 1.0);
  double squeeze_r = 0.0; // position squeezing of each wavepacket
};

void validate(const HarmonicCollisionConfig& cfg);

/// Unperturbed trajectories; t = 0 is the turning point at the far end.
struct HarmonicTrajectory {
  double A = 1.0;
  double b = 0.05;
  double omega = 1.0;

  double x1(double t) const;
  double x2(double t) const;
  double rho(double t) const; // 2A + b + 2A cos(omega t)
  double period() const;
};

HarmonicTrajectory harmonic_trajectories(const HarmonicCollisionConfig& cfg);

struct HarmonicIntegrals {
  double potential = 0.0; // int V dt over one period
  double cos_weighted = 0.0; // int V' cos(omega t) dt
  double sin_weighted = 0.0; // int V' sin(omega t) dt
  double effective_duration = 0.0; // RMS width of V(rho(t)) about its centroid
};

/// Integrals over one trap period at the potential's current coupling.
HarmonicIntegrals harmonic_integrals(const HarmonicCollisionConfig& cfg);

/// Coupling for which (1/hbar) int_0^{2pi/omega} V dt = pi.
double calibrate_coupling(const HarmonicCollisionConfig& cfg, double hbar = 1.0);

struct HarmonicError {
  double delta_sq = 0.0;
  double coupling = 0.0; // calibrated C
  double dx0_sq = 0.0;   // e^{-2r} hbar / 2 m omega
  HarmonicIntegrals integrals;
};

/// delta^2 = (2/hbar^2)(int V' cos)^2 dx0^2 at the calibrated coupling.
/// Throws SymmetryViolationError if |int V' sin| >= 1e-9 |int V' cos|.
HarmonicError error_variance_harmonic(const HarmonicCollisionConfig& cfg, double hbar = 1.0);

struct DipoleRatio {
  double b_r_config = 0.0;    // b R(b) at the configured b
  double b_r[3] = {0, 0, 0};  // at b/A = 1e-2, 1e-3, 1e-4
  double extrapolated = 0.0;
};

/// R(b) = |int V' cos| / |int V|; b R(b) tends to 5/2 for rho^-3. Throws
/// NumericalInconsistencyError if the extrapolation is unstable.
DipoleRatio dipole_leading_ratio(const HarmonicCollisionConfig& cfg);

/// energy = m omega^2 A^2 (both oscillators), bound = hbar/(epsilon T) with
/// T = 2 pi / omega.
BoundReport harmonic_energy_bound(const HarmonicCollisionConfig& cfg, double epsilon,
                                  double hbar = 1.0);

struct ReturnMismatch {
  double dx = 0.0; // x2(2pi/omega) minus its unperturbed value
  double dp = 0.0; // p2(2pi/omega); the unperturbed return momentum is zero
  double coupling = 0.0;
  double energy_drift = 0.0; // relative, meaningful when coupling = 0
  std::size_t steps = 0;
};

/// Integrates both particles (trap force plus mutual force) over one period
/// from the unperturbed start. coupling_scale multiplies the calibrated C.
ReturnMismatch classical_return_mismatch(const HarmonicCollisionConfig& cfg, double hbar = 1.0,
                                         double coupling_scale = 1.0, double tol = 1e-10);

struct SqueezingProbe {
  double leading = 0.0;  // delta^2 with dx0^2 reduced by e^{-2r}
  double proxy = 0.0;    // 2 m omega dx_return^2 e^{2r} / hbar
  double dp_proxy = 0.0; // dp_return^2 e^{2r} / (m omega hbar), kept for comparison
  double ratio = 0.0;    // proxy / leading
  bool flagged = false;  // ratio > 0.1: second order no longer negligible
  ReturnMismatch mismatch;
};

/// A potential whose coupling is zero switches the interaction off (proxy 0);
/// otherwise the coupling is recalibrated to the pi phase.
SqueezingProbe squeezing_consistency_probe(const HarmonicCollisionConfig& cfg, double epsilon,
                                           double hbar = 1.0);

} // namespace gatebound::collision
