#include "gatebound/pulse/pulse.hpp"

#include "gatebound/error.hpp"
#include "gatebound/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gatebound::pulse {
namespace {

/// int_0^h (y0 + (y1 - y0) s / h) e^{-i w s} ds = y0 a + (y1 - y0) b.
struct FilonWeights {
  cplx a;
  cplx b;
};

FilonWeights filon_weights(double omega, double h) {
  const double theta = omega * h;
  if (std::abs(theta) < 1.0) {
    // a = h sum (-i theta)^k / (k+1)!, b = h sum (-i theta)^k / (k! (k+2))
    cplx a{0.0, 0.0}, b{0.0, 0.0};
    cplx power{1.0, 0.0};
    double fact = 1.0;
    for (int k = 0; k < 30; ++k) {
      if (k > 0) {
        power *= cplx{0.0, -theta};
        fact *= k;
      }
      a += power / (fact * (k + 1));
      b += power / (fact * (k + 2));
    }
    return {h * a, h * b};
  }
  const cplx e = std::polar(1.0, -theta);
  const cplx a = (1.0 - e) / cplx{0.0, omega};
  const cplx b = (e * cplx{1.0, theta} - 1.0) / (omega * omega * h);
  return {a, b};
}

/// Filon sum over every `stride`-th sample.
cplx filon(std::span<const double> g, double t_start, double h, std::size_t stride, double omega) {
  const double step = h * static_cast<double>(stride);
  const auto w = filon_weights(omega, step);
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j + stride < g.size(); j += stride) {
    const double t = t_start + static_cast<double>(j) * h;
    sum += std::polar(1.0, -omega * t) * (g[j] * w.a + (g[j + stride] - g[j]) * w.b);
  }
  return sum;
}

} // namespace

SampledEnvelope sample_envelope(const std::function<double(double)>& env, double t_start,
                                double t_end, std::size_t n) {
  if (!(t_end > t_start)) throw ValidationError("sample_envelope: t_end must exceed t_start");
  n = std::max<std::size_t>(n, 5);
  while (n % 4 != 1) ++n;
  SampledEnvelope out{t_start, t_end, std::vector<double>(n)};
  const double h = (t_end - t_start) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    out.samples[j] = env(j + 1 == n ? t_end : t_start + static_cast<double>(j) * h);
  }
  return out;
}

NonlinearReduction nonlinear_reduce(int power, const SampledEnvelope& envelope,
                                    std::span<const WeightedMode> modes) {
  if (power < 1) throw ValidationError("nonlinear_reduce: P must be >= 1");
  const std::size_t n = envelope.samples.size();
  if (n < 5 || n % 4 != 1) {
    throw ValidationError("nonlinear_reduce: sample count must be >= 5 and equal 1 mod 4");
  }
  if (!(envelope.t_end > envelope.t_start)) {
    throw ValidationError("nonlinear_reduce: envelope window is empty");
  }
  const double h = (envelope.t_end - envelope.t_start) / static_cast<double>(n - 1);
  std::vector<double> g(n);
  double l1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = std::pow(envelope.samples[j], power - 1);
    l1 += std::abs(g[j]) * h;
  }

  NonlinearReduction out;
  out.power = power;
  for (const auto& m : modes) {
    if (!(m.omega > 0.0)) throw ValidationError("nonlinear_reduce: omega must be > 0");
    const cplx f1 = filon(g, envelope.t_start, h, 1, m.omega);
    const cplx f2 = filon(g, envelope.t_start, h, 2, m.omega);
    const cplx f4 = filon(g, envelope.t_start, h, 4, m.omega);
    // Piecewise-linear Filon has an h^2 leading error; one Richardson step each.
    const cplx r1 = f1 + (f1 - f2) / 3.0;
    const cplx r2 = f2 + (f2 - f4) / 3.0;
    const double change = std::abs(m.weight) * std::abs(r1 - r2);
    const double scale = std::abs(m.weight) * std::max(l1, std::abs(r1));
    if (change > 1e-8 * std::max(scale, 1e-300)) {
      std::ostringstream msg;
      msg << "nonlinear_reduce: envelope under-sampled for omega = " << m.omega
          << " (grid halving moves c_k by " << change / std::max(scale, 1e-300)
          << " relative; need < 1e-8)";
      throw SamplingError(msg.str());
    }
    out.refinement_change = std::max(out.refinement_change, change);
    out.omegas.push_back(m.omega);
    out.coefficients.push_back(m.weight * r1);
  }
  return out;
}

std::vector<cplx> matched_amplitudes(std::span<const cplx> coefficients) {
  double s2 = 0.0;
  for (const auto& c : coefficients) s2 += std::norm(c);
  if (s2 == 0.0) {
    throw DegenerateConfigurationError("matched_amplitudes: all coefficients vanish");
  }
  std::vector<cplx> alphas;
  alphas.reserve(coefficients.size());
  for (const auto& c : coefficients) alphas.push_back(pi / (2.0 * s2) * std::conj(c));
  return alphas;
}

BoundReport nonlinear_bound_check(const NonlinearReduction& reduction,
                                  std::span<const cplx> alphas, double epsilon, double hbar) {
  if (alphas.size() != reduction.coefficients.size()) {
    throw DimensionError("nonlinear_bound_check: one amplitude per mode required");
  }
  if (!(epsilon > 0.0)) throw ValidationError("nonlinear_bound_check: epsilon must be > 0");
  // Same arithmetic as the linear path, with g_k J_k replaced by c_k.
  BoundReport r;
  const double p2 = static_cast<double>(reduction.power) * reduction.power;
  double phase = 0.0, sum_c = 0.0, n = 0.0, weighted = 0.0, energy = 0.0;
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double w = reduction.omegas[k];
    phase += 2.0 * (reduction.coefficients[k] * alphas[k]).real();
    sum_c += std::norm(reduction.coefficients[k]);
    n += std::norm(alphas[k]);
    weighted += w * std::norm(alphas[k]);
    energy += hbar * w * std::norm(alphas[k]);
    lo = k == 0 ? w : std::min(lo, w);
    hi = k == 0 ? w : std::max(hi, w);
  }
  const double mean = n > 0.0 ? std::clamp(weighted / n, lo, hi) : 0.0;
  r.epsilon = epsilon;
  r.phase = phase;
  r.error = p2 * sum_c;
  r.photon_number = n;
  r.mean_omega = mean;
  r.energy = energy;
  r.bound = pi * pi / 4.0 * p2 * hbar * mean / epsilon;
  r.calibrated = std::abs(phase - pi) <= phase_tolerance;
  r.premise_met = r.error <= epsilon * (1.0 + premise_slack);
  r.satisfied = r.energy >= r.bound * (1.0 - bound_slack);
  r.metrics["power"] = reduction.power;
  r.metrics["linear_bound"] = pi * pi / 4.0 * hbar * mean / epsilon;
  r.metrics["refinement_change"] = reduction.refinement_change;
  if (!r.premise_met) r.notes["bound"] = "error exceeds epsilon; bound not required";
  if (!r.calibrated) r.notes["phase"] = "off calibration: phase differs from pi";
  return r;
}

} // namespace gatebound::pulse
