#pragma once

#include "gatebound/fock/operator.hpp"
#include "gatebound/units.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gatebound::fock {

/// Amplitudes of the control degree of freedom over |0>, ..., |cutoff-1>.
class ControlState {
public:
  ControlState() = default;
  explicit ControlState(std::vector<cplx> amplitudes, UnitSystem units = UnitSystem::natural)
      : amplitudes_(std::move(amplitudes)), units_(units) {}

  std::size_t cutoff() const { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  std::span<cplx> amplitudes() { return amplitudes_; }
  const cplx& operator[](std::size_t n) const { return amplitudes_[n]; }
  UnitSystem unit_system() const { return units_; }

  double norm_sq() const;

private:
  std::vector<cplx> amplitudes_;
  UnitSystem units_ = UnitSystem::natural;
};

enum class CutoffPolicy { enforce, override_rule };

/// ceil(|alpha|^2 + 12 sqrt(max(|alpha|^2, 1)) + 20): the smallest cutoff the
/// coherent-state constructor accepts by default. Poisson tails beyond it
/// stay below 1e-12.
std::size_t coherent_cutoff(double alpha_abs);

/// e^{-|a|^2/2} a^n / sqrt(n!), evaluated in log space and renormalized on the
/// truncated basis. Throws CutoffInsufficientError below coherent_cutoff(|a|)
/// unless policy is override_rule.
ControlState coherent_state(cplx alpha, std::size_t cutoff,
                            CutoffPolicy policy = CutoffPolicy::enforce);

/// Throws IndexError unless n < cutoff.
ControlState number_state(std::size_t n, std::size_t cutoff);

/// D(alpha) S(r)|0> with S(r) = exp(r (a^2 - a_dag^2) / 2): the quadrature
/// x = (a + a_dag)/sqrt(2) has variance e^{-2r}/2, p has e^{2r}/2. Amplitudes
/// come from the eigen-equation (cosh r a + sinh r a_dag)|psi> =
/// (cosh r alpha + sinh r conj(alpha))|psi>, solved by forward recurrence on
/// an extended basis. Throws CutoffInsufficientError if more than 1e-10 of
/// the probability lies at or beyond `cutoff`.
ControlState squeezed_coherent_state(cplx alpha, double r, std::size_t cutoff);

/// Probability mass a normalized amplitude vector places at indices >= cutoff
/// when built on a longer basis; exposed for tests.
double squeezed_tail_mass(cplx alpha, double r, std::size_t cutoff);

/// <lhs|rhs>. Throws DimensionError on cutoff mismatch.
cplx overlap(const ControlState& lhs, const ControlState& rhs);

/// <psi| M |psi>
cplx expectation(const ControlState& psi, const OperatorMatrix& m);

/// Low-order ladder moments computed from amplitudes directly, with
/// <a a_dag> = <a_dag a> + 1 taken from the untruncated commutator.
struct LadderMoments {
  cplx a;        // <a>
  cplx a2;       // <a a>
  double n;      // <a_dag a>
  double n_sq;   // <(a_dag a)^2>
};
LadderMoments ladder_moments(const ControlState& psi);

/// Variance of (a + a_dag)/sqrt(2) and (a - a_dag)/(i sqrt(2)).
std::pair<double, double> quadrature_variances(const ControlState& psi);

} // namespace gatebound::fock
