#pragma once

#include "gatebound/fock/operator.hpp"
#include "gatebound/fock/state.hpp"
#include "gatebound/gate/drive.hpp"

#include <complex>
#include <utility>
#include <variant>

namespace gatebound::gate {

using fock::ControlState;
using fock::OperatorMatrix;

/// Everything the controlled sign-flip needs on the control side. The qubit
/// pair never appears: the interaction V|11><11| only acts on the |11>
/// branch, so the gate reduces to control-space amplitudes.
struct GateScenario {
  ControlState control;                            // |psi_0>
  OperatorMatrix h0;                               // self-Hamiltonian
  std::variant<OperatorMatrix, LinearDrive> v;     // Schroedinger V or interaction-picture drive
  double duration = 0.0;                           // gate time T
};

struct GateOutcome {
  std::complex<double> inner{1.0, 0.0}; // <psi_0| T exp(-i int V_I) |psi_0>
  double failure_probability = 1.0;     // 1 - |1 - inner|^2 / 4
  double phase_residual = 0.0;          // |int <V_I> dt - pi|
  double switch_residual_start = 0.0;   // <V_I(0)^2>
  double switch_residual_end = 0.0;     // <V_I(T)^2>
  double control_energy = 0.0;          // <H0> minus the lowest eigenvalue of H0
  bool calibrated = false;              // phase_residual < 0.1 pi
};

/// 1 - |1 - inner|^2 / 4, clamped to [0, 1].
double failure_from_inner(std::complex<double> inner);

/// Exact p. Matrix V: propagate under H0 and under H0 + V and overlap.
/// Linear drive: propagate under V_I(t) directly in the interaction picture.
GateOutcome failure_probability_exact(const GateScenario& scenario, double tol = 1e-10);

struct PerturbativeEstimate {
  double probability = 0.0;
  double phase_residual = 0.0;
  /// Set when the phase condition is missed by more than 0.1 pi; the
  /// estimate then says nothing about a working gate.
  bool advisory_only = false;
};

/// 1/2 int_0^T int_0^T Re <dV_I(t) dV_I(t')> dt dt' with dV = V - <V>, by
/// nested adaptive quadrature to quad_tol (absolute).
PerturbativeEstimate failure_probability_perturbative(const GateScenario& scenario,
                                                      double quad_tol = 1e-10);

/// Closed-form outcome for a linear drive on the coherent state |alpha>:
/// the propagator is exp(i phi) D(beta) with beta = -i int f and
/// phi = Im int_0^T dt int_0^t dt' f(t) conj(f(t')).
struct DisplacementTerms {
  std::complex<double> beta;
  double magnus_phase = 0.0;
};
DisplacementTerms displacement_terms(const LinearDrive& drive, double duration);
GateOutcome displacement_oracle(std::complex<double> control_alpha, const LinearDrive& drive,
                                double duration);

/// (<V_I(0)^2>, <V_I(T)^2>) with respect to |psi_0>.
std::pair<double, double> switch_off_check(const GateScenario& scenario);

/// |psi_0> = |n>, H0 = omega a_dag a, V = g a_dag a, T = pi / (g n).
GateScenario counterexample_scenario(int n, double g, std::size_t cutoff, double omega = 1.0);
GateOutcome counterexample_always_on(int n, double g, std::size_t cutoff, double omega = 1.0,
                                     double tol = 1e-12);

/// Coherent control |alpha| (real alpha) with a real drive of the given
/// envelope scaled so that int <V_I> dt = pi: f = pi / (2 alpha area) env(t).
GateScenario coherent_pi_scenario(double alpha, const Envelope& envelope,
                                  std::size_t cutoff = 0, double omega = 1.0);

/// |alpha| at which coherent_pi_scenario gives failure probability p. The
/// drive is real and resonant, so inner = -exp(-pi^2 / (8 alpha^2)) exactly.
/// p in (0, 3/4).
double coherent_alpha_for_failure(double p);

/// Rescales the drive amplitude so int <V_I> dt = pi on coherent |alpha>.
/// Throws DegenerateConfigurationError when the drive does not couple.
LinearDrive calibrate_drive(const LinearDrive& drive, std::complex<double> alpha, double duration);

} // namespace gatebound::gate
