#include "gatebound/fock/state.hpp"

#include "gatebound/error.hpp"
#include "gatebound/kernels/complex_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gatebound::fock {
namespace {

void normalize(std::vector<cplx>& amps) {
  const double norm = std::sqrt(kernels::norm_sq(amps));
  for (auto& c : amps) c /= norm;
}

} // namespace

double ControlState::norm_sq() const { return kernels::norm_sq(amplitudes_); }

std::size_t coherent_cutoff(double alpha_abs) {
  const double mean = alpha_abs * alpha_abs;
  return static_cast<std::size_t>(std::ceil(mean + 12.0 * std::sqrt(std::max(mean, 1.0)) + 20.0));
}

ControlState coherent_state(cplx alpha, std::size_t cutoff, CutoffPolicy policy) {
  if (cutoff < 1) throw ValidationError("coherent_state: cutoff must be >= 1");
  const double r = std::abs(alpha);
  if (policy == CutoffPolicy::enforce && cutoff < coherent_cutoff(r)) {
    std::ostringstream msg;
    msg << "coherent_state: cutoff " << cutoff << " below the tail rule minimum "
        << coherent_cutoff(r) << " for |alpha|=" << r;
    throw CutoffInsufficientError(msg.str());
  }
  std::vector<cplx> amps(cutoff);
  if (r == 0.0) {
    amps[0] = 1.0;
    return ControlState(std::move(amps));
  }
  const double theta = std::arg(alpha);
  const double log_r = std::log(r);
  for (std::size_t n = 0; n < cutoff; ++n) {
    const double dn = static_cast<double>(n);
    const double log_mag = -0.5 * r * r + dn * log_r - 0.5 * std::lgamma(dn + 1.0);
    amps[n] = std::polar(std::exp(log_mag), dn * theta);
  }
  normalize(amps);
  return ControlState(std::move(amps));
}

ControlState number_state(std::size_t n, std::size_t cutoff) {
  if (n >= cutoff) {
    std::ostringstream msg;
    msg << "number_state: n=" << n << " outside basis of size " << cutoff;
    throw IndexError(msg.str());
  }
  std::vector<cplx> amps(cutoff);
  amps[n] = 1.0;
  return ControlState(std::move(amps));
}

namespace {

// Unnormalized amplitudes on [0, length) from the three-term recurrence
//   mu sqrt(n+1) c_{n+1} = beta c_n - nu sqrt(n) c_{n-1},  c_{-1} = 0.
std::vector<cplx> squeezed_raw(cplx alpha, double r, std::size_t length) {
  const double mu = std::cosh(r);
  const double nu = std::sinh(r);
  const cplx beta = mu * alpha + nu * std::conj(alpha);
  std::vector<cplx> c(length);
  c[0] = 1.0;
  if (length > 1) c[1] = beta * c[0] / mu;
  for (std::size_t n = 1; n + 1 < length; ++n) {
    const double dn = static_cast<double>(n);
    c[n + 1] = (beta * c[n] - nu * std::sqrt(dn) * c[n - 1]) / (mu * std::sqrt(dn + 1.0));
    const double mag = std::abs(c[n + 1]);
    if (mag > 1e200) {
      for (std::size_t k = 0; k <= n + 1; ++k) c[k] *= 1e-200;
    }
  }
  return c;
}

std::size_t extended_length(cplx alpha, double r, std::size_t cutoff) {
  const double mean = std::norm(alpha) + std::sinh(r) * std::sinh(r);
  const auto rule = coherent_cutoff(std::sqrt(mean)) * 2 + static_cast<std::size_t>(40 * std::exp(2 * std::abs(r)));
  return std::max(cutoff + 64, std::max(2 * cutoff, rule));
}

} // namespace

double squeezed_tail_mass(cplx alpha, double r, std::size_t cutoff) {
  auto c = squeezed_raw(alpha, r, extended_length(alpha, r, cutoff));
  double total = 0.0, tail = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    total += std::norm(c[n]);
    if (n >= cutoff) tail += std::norm(c[n]);
  }
  return tail / total;
}

ControlState squeezed_coherent_state(cplx alpha, double r, std::size_t cutoff) {
  if (cutoff < 1) throw ValidationError("squeezed_coherent_state: cutoff must be >= 1");
  auto c = squeezed_raw(alpha, r, extended_length(alpha, r, cutoff));
  double total = 0.0, tail = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    total += std::norm(c[n]);
    if (n >= cutoff) tail += std::norm(c[n]);
  }
  if (!(tail / total < 1e-10)) {
    std::ostringstream msg;
    msg << "squeezed_coherent_state: tail mass " << tail / total << " beyond cutoff " << cutoff
        << " exceeds 1e-10";
    throw CutoffInsufficientError(msg.str());
  }
  c.resize(cutoff);
  normalize(c);
  return ControlState(std::move(c));
}

cplx overlap(const ControlState& lhs, const ControlState& rhs) {
  if (lhs.cutoff() != rhs.cutoff()) {
    std::ostringstream msg;
    msg << "overlap: cutoff mismatch (" << lhs.cutoff() << " vs " << rhs.cutoff() << ")";
    throw DimensionError(msg.str());
  }
  return kernels::dot(lhs.amplitudes(), rhs.amplitudes());
}

cplx expectation(const ControlState& psi, const OperatorMatrix& m) {
  if (psi.cutoff() != m.cutoff()) throw DimensionError("expectation: cutoff mismatch");
  const auto y = m.apply(psi.amplitudes());
  return kernels::dot(psi.amplitudes(), y);
}

LadderMoments ladder_moments(const ControlState& psi) {
  LadderMoments m{};
  const auto c = psi.amplitudes();
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double dk = static_cast<double>(k);
    const double p = std::norm(c[k]);
    m.n += dk * p;
    m.n_sq += dk * dk * p;
    if (k + 1 < n) m.a += std::conj(c[k]) * c[k + 1] * std::sqrt(dk + 1.0);
    if (k + 2 < n) m.a2 += std::conj(c[k]) * c[k + 2] * std::sqrt((dk + 1.0) * (dk + 2.0));
  }
  return m;
}

std::pair<double, double> quadrature_variances(const ControlState& psi) {
  const auto m = ladder_moments(psi);
  // x = (a + a_dag)/sqrt2: <x^2> = (<a^2> + <a_dag^2> + 2<a_dag a> + 1)/2
  const double x_mean = std::sqrt(2.0) * m.a.real();
  const double p_mean = std::sqrt(2.0) * m.a.imag();
  const double x2 = 0.5 * (2.0 * m.a2.real() + 2.0 * m.n + 1.0);
  const double p2 = 0.5 * (-2.0 * m.a2.real() + 2.0 * m.n + 1.0);
  return {x2 - x_mean * x_mean, p2 - p_mean * p_mean};
}

} // namespace gatebound::fock
