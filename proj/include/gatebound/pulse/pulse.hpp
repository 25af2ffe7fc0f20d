#pragma once

// Multimode coherent pulses coupled linearly (or through a power of the
// field) to the |11> branch. Phase and error functionals feed the energy
// bound; a randomized search tries to beat it. Squeezed fields get their own
// trade-off.

#include "gatebound/bound_report.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gatebound::pulse {

using cplx = std::complex<double>;

struct Mode {
  double omega = 1.0; // rad/s, > 0
  cplx g;             // coupling g_k, rad/s
  cplx alpha;         // coherent amplitude
};

struct PulseSpec {
  std::vector<Mode> modes;
  double t_start = 0.0;
  double t_end = 1.0;
};

/// Throws ValidationError unless every omega > 0 and t_end > t_start.
void validate(const PulseSpec& pulse);

/// int_{t_start}^{t_end} exp(-i omega t) dt in closed form.
cplx mode_integral(double omega, double t_start, double t_end);

/// sum_k g_k alpha_k J_k + c.c.
double phase_accumulated(const PulseSpec& pulse);
/// sum_k |g_k J_k|^2.
double quantum_error(const PulseSpec& pulse);
double photon_number(const PulseSpec& pulse);
/// Photon-weighted mean frequency; the plain mean of omega_k when no photons.
double mean_omega(const PulseSpec& pulse);
/// sum_k hbar omega_k |alpha_k|^2.
double field_energy(const PulseSpec& pulse, double hbar = 1.0);

/// pi^2 / (4 epsilon); epsilon in (0, 1).
double min_photon_number(double epsilon);

/// Phase tolerance for the calibrated flag.
inline constexpr double phase_tolerance = 1e-6;
/// Relative slack allowed in energy >= bound before a report is unsatisfied.
inline constexpr double bound_slack = 1e-9;
/// Relative rounding allowance in error <= epsilon.
inline constexpr double premise_slack = 1e-12;

/// bound = (pi^2/4) hbar <omega> / epsilon.
BoundReport energy_bound_check(const PulseSpec& pulse, double epsilon, double hbar = 1.0);

/// Single mode saturating Cauchy-Schwarz: g J = sqrt(epsilon), alpha
/// phase-matched with |alpha| = pi / (2 sqrt(epsilon)).
PulseSpec equality_pulse(double omega, double epsilon, double t_start, double t_end);

// Nonlinear coupling H = hbar g E^P.

struct SampledEnvelope {
  double t_start = 0.0;
  double t_end = 1.0;
  std::vector<double> samples; // uniform grid including both ends
};

/// Samples env at n points (n is rounded up to the next value = 1 mod 4 so the
/// grid can be halved twice).
SampledEnvelope sample_envelope(const std::function<double(double)>& env, double t_start,
                                double t_end, std::size_t n);

struct WeightedMode {
  double omega = 1.0;
  double weight = 1.0; // absorbs g and the field normalization
};

struct NonlinearReduction {
  int power = 1;
  std::vector<double> omegas;
  std::vector<cplx> coefficients; // c_k = w_k int E^{P-1} exp(-i omega_k t) dt
  double refinement_change = 0.0; // max |R(h) - R(2h)| over modes
};

/// Piecewise-linear Filon quadrature with one Richardson step. Throws
/// SamplingError when halving the grid moves any coefficient by more than
/// 1e-8 of its scale.
NonlinearReduction nonlinear_reduce(int power, const SampledEnvelope& envelope,
                                    std::span<const WeightedMode> modes);

/// Phase sum_k alpha_k c_k + c.c., error P^2 sum_k |c_k|^2,
/// bound (pi^2/4) P^2 hbar <omega> / epsilon.
BoundReport nonlinear_bound_check(const NonlinearReduction& reduction,
                                  std::span<const cplx> alphas, double epsilon,
                                  double hbar = 1.0);

/// Amplitudes alpha_k = s conj(c_k) with s fixed by phase = pi.
std::vector<cplx> matched_amplitudes(std::span<const cplx> coefficients);

// Squeezing.

/// hbar omega (1 / (e^{2r} epsilon) + e^{2r}).
double squeezed_energy(double r, double epsilon, double omega, double hbar = 1.0);

struct SqueezingOptimum {
  double r_star = 0.0; // -ln(epsilon) / 4
  double e_min = 0.0;  // 2 hbar omega / sqrt(epsilon)
  double r_numeric = 0.0;
  double e_numeric = 0.0;
  double relative_disagreement = 0.0; // |e_numeric - e_min| / e_min
};

/// Closed form plus a golden-section search on [0, -ln epsilon]. epsilon in
/// (0, 1]; at epsilon = 1 both reduce to r = 0.
SqueezingOptimum optimize_squeezing(double epsilon, double omega, double hbar = 1.0);

struct LinewidthBound {
  double omega_min = 0.0;     // 1 / (T sqrt(epsilon))
  double derived_bound = 0.0; // 2 hbar / (epsilon T), by substitution
  double quoted_bound = 0.0;  // hbar / (epsilon T), the commonly quoted form
};

LinewidthBound linewidth_combined_bound(double duration, double epsilon, double hbar = 1.0);

// Adversarial search.

struct SearchOptions {
  double epsilon = 0.01;
  std::size_t n_modes = 3;
  std::size_t budget = 1000;        // total pulses evaluated
  std::uint64_t seed = 1;
  std::size_t descent_steps = 199;  // local steps after each random start
  std::size_t parallelism = 1;
  double omega_min = 0.5;
  double omega_max = 50.0;
  double t_start = 0.0;
  double t_end = 1.0;
};

struct SearchResult {
  BoundReport best;
  double best_ratio = 0.0;
  std::size_t restarts = 0;
  std::size_t evaluations = 0;
  std::vector<double> restart_ratios;
};

/// A random pulse projected onto phase = pi with error = u epsilon, u in (0, 1].
PulseSpec random_feasible_pulse(std::uint64_t seed, double epsilon, std::size_t n_modes,
                                double omega_min = 0.5, double omega_max = 50.0,
                                double t_start = 0.0, double t_end = 1.0);

/// Random starts followed by adaptive-step local descent on energy/bound.
/// Deterministic for a given seed regardless of parallelism.
SearchResult adversarial_pulse_search(const SearchOptions& opts);

} // namespace gatebound::pulse
