#pragma once

#include "gatebound/fock/operator.hpp"
#include "gatebound/fock/state.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gatebound::fock {

/// H(t) in energy units with hbar = 1.
using HamiltonianSource = std::function<OperatorMatrix(double t)>;

HamiltonianSource constant_hamiltonian(OperatorMatrix h);

enum class StepScheme {
  /// exp(-i h H(t + h/2)); second order.
  midpoint,
  /// Fourth-order commutator-free Magnus step on the Gauss-Legendre nodes
  /// t1, t2: exp(-i h (w1 H1 + w2 H2)) exp(-i h (w2 H1 + w1 H2)) with
  /// w1,2 = (3 -+ 2 sqrt 3) / 12.
  magnus4,
};

struct EvolveOptions {
  double tol = 1e-10;
  StepScheme scheme = StepScheme::magnus4;
  double initial_step = 0.0; // 0 picks span/8
  double min_step = 0.0;     // 0 picks 1e-12 * span
  std::size_t max_steps = 200'000;
  /// Times where H(t) has kinks or jumps; steps end exactly on them.
  std::vector<double> breakpoints;
};

struct Propagation {
  ControlState state;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double max_error_estimate = 0.0;
};

/// Time-ordered propagation of `state` from t0 to t1 with step-doubling
/// error control. Each step is taken once at size h and again as two h/2
/// steps whose difference bounds the local error; a step is accepted while
/// that error stays below tol * h / (t1 - t0), so accumulated errors stay
/// below tol. Local errors at the rounding level are always accepted. The two
/// half steps are kept. Throws IntegrationFailure on step underflow, with the
/// failing step in the message.
Propagation evolve_with_stats(const ControlState& state, const HamiltonianSource& hamiltonian,
                              double t0, double t1, const EvolveOptions& opts = {});

ControlState evolve(const ControlState& state, const HamiltonianSource& hamiltonian, double t0,
                    double t1, double tol);

/// exp(-i K) psi for Hermitian K given through its action, by Taylor series
/// on substeps of size at most 1.5 in `norm_bound` units. Truncation stops
/// once a term falls below 1e-17 |psi|.
std::vector<cplx> expm_action(const std::function<void(std::span<const cplx>, std::span<cplx>)>& apply_k,
                              double norm_bound, std::span<const cplx> psi);

} // namespace gatebound::fock
