#include "gatebound/collision/collision.hpp"

#include "detail.hpp"

#include "gatebound/error.hpp"
#include "gatebound/numerics/ode.hpp"
#include "gatebound/numerics/quadrature.hpp"
#include "gatebound/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace gatebound::collision {

void validate(const HarmonicCollisionConfig& cfg) {
  if (!(cfg.m > 0.0 && cfg.omega > 0.0 && cfg.A > 0.0 && cfg.b > 0.0)) {
    throw ValidationError("harmonic collision: m, omega, A, b must all be positive");
  }
  if (!std::isfinite(cfg.squeeze_r)) throw ValidationError("harmonic collision: bad squeeze_r");
  cfg.potential.check_decay(cfg.b);
}

double HarmonicTrajectory::x1(double t) const { return -(A + 0.5 * b) - A * std::cos(omega * t); }
double HarmonicTrajectory::x2(double t) const { return (A + 0.5 * b) + A * std::cos(omega * t); }
double HarmonicTrajectory::rho(double t) const {
  // 2A + b + 2A cos(wt), written so that closest approach does not cancel.
  const double c = std::cos(0.5 * omega * t);
  return b + 4.0 * A * c * c;
}
double HarmonicTrajectory::period() const { return 2.0 * pi / omega; }

HarmonicTrajectory harmonic_trajectories(const HarmonicCollisionConfig& cfg) {
  validate(cfg);
  return {cfg.A, cfg.b, cfg.omega};
}

namespace {

/// Breakpoints graded around closest approach, where rho ~ b + A (omega s)^2.
std::vector<double> approach_breakpoints(const HarmonicTrajectory& tr) {
  const double mid = 0.5 * tr.period();
  const double width = std::sqrt(tr.b / tr.A) / tr.omega;
  std::vector<double> pts{mid};
  for (double k : {1.0, 4.0, 16.0, 64.0}) {
    if (k * width < mid) {
      pts.push_back(mid - k * width);
      pts.push_back(mid + k * width);
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

} // namespace

HarmonicIntegrals harmonic_integrals(const HarmonicCollisionConfig& cfg) {
  const auto tr = harmonic_trajectories(cfg);
  const auto cuts = approach_breakpoints(tr);
  const double period = tr.period();
  const auto& v = cfg.potential;
  auto quad = [&](auto f, numerics::QuadOptions opts) {
    return numerics::integrate<double>(f, 0.0, period, opts, cuts).value;
  };
  HarmonicIntegrals out;
  out.potential = quad([&](double t) { return v.value(tr.rho(t)); }, detail::tight());
  out.cos_weighted = quad(
      [&](double t) { return v.derivative(tr.rho(t)) * std::cos(tr.omega * t); }, detail::tight());
  // The sine-weighted integral should vanish, so its tolerance is absolute,
  // pinned to the cosine-weighted scale.
  numerics::QuadOptions sin_opts = detail::tight();
  sin_opts.abs_tol = 1e-13 * std::abs(out.cos_weighted);
  out.sin_weighted =
      quad([&](double t) { return v.derivative(tr.rho(t)) * std::sin(tr.omega * t); }, sin_opts);
  if (out.potential != 0.0) {
    const double centroid =
        quad([&](double t) { return t * v.value(tr.rho(t)); }, detail::tight()) / out.potential;
    const double second = quad(
        [&](double t) {
          const double d = t - centroid;
          return d * d * v.value(tr.rho(t));
        },
        detail::tight());
    out.effective_duration = std::sqrt(std::abs(second / out.potential));
  }
  return out;
}

double calibrate_coupling(const HarmonicCollisionConfig& cfg, double hbar) {
  HarmonicCollisionConfig unit = cfg;
  unit.potential = cfg.potential.with_coupling(1.0);
  const double action = harmonic_integrals(unit).potential / hbar;
  if (!(std::abs(action) > 0.0) || !std::isfinite(action)) {
    throw DegenerateConfigurationError("calibrate_coupling: action at C = 1 is zero or not finite");
  }
  return pi / action;
}

HarmonicError error_variance_harmonic(const HarmonicCollisionConfig& cfg, double hbar) {
  HarmonicError out;
  out.coupling = calibrate_coupling(cfg, hbar);
  HarmonicCollisionConfig calibrated = cfg;
  calibrated.potential = cfg.potential.with_coupling(out.coupling);
  out.integrals = harmonic_integrals(calibrated);
  const double ic = out.integrals.cos_weighted;
  const double is = out.integrals.sin_weighted;
  if (!(std::abs(is) < 1e-9 * std::abs(ic))) {
    std::ostringstream msg;
    msg << "error_variance_harmonic: sine-weighted integral " << is
        << " does not vanish against cosine-weighted " << ic;
    throw SymmetryViolationError(msg.str());
  }
  out.dx0_sq = std::exp(-2.0 * cfg.squeeze_r) * hbar / (2.0 * cfg.m * cfg.omega);
  out.delta_sq = 2.0 / (hbar * hbar) * ic * ic * out.dx0_sq;
  return out;
}

DipoleRatio dipole_leading_ratio(const HarmonicCollisionConfig& cfg) {
  validate(cfg);
  const auto n = cfg.potential.exponent();
  if (!n || *n != 3.0) throw ValidationError("dipole_leading_ratio: needs a rho^-3 potential");
  auto b_r = [&](double b) {
    HarmonicCollisionConfig c = cfg;
    c.b = b;
    c.potential = cfg.potential.with_coupling(1.0);
    const auto ints = harmonic_integrals(c);
    return b * std::abs(ints.cos_weighted) / std::abs(ints.potential);
  };
  DipoleRatio out;
  out.b_r_config = b_r(cfg.b);
  const double x[3] = {1e-2, 1e-3, 1e-4};
  for (int i = 0; i < 3; ++i) out.b_r[i] = b_r(x[i] * cfg.A);
  // Quadratic through the three points, evaluated at b/A = 0.
  double limit = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) w *= x[j] / (x[j] - x[i]);
    }
    limit += w * out.b_r[i];
  }
  out.extrapolated = limit;
  const double d1 = std::abs(out.b_r[1] - out.b_r[0]);
  const double d2 = std::abs(out.b_r[2] - out.b_r[1]);
  if (!(d2 <= d1) || !std::isfinite(limit)) {
    std::ostringstream msg;
    msg << "dipole_leading_ratio: b R(b) not converging as b/A -> 0 (" << out.b_r[0] << ", "
        << out.b_r[1] << ", " << out.b_r[2] << ")";
    throw NumericalInconsistencyError(msg.str());
  }
  return out;
}

BoundReport harmonic_energy_bound(const HarmonicCollisionConfig& cfg, double epsilon,
                                  double hbar) {
  if (!(epsilon > 0.0)) throw ValidationError("harmonic_energy_bound: epsilon must be > 0");
  const auto err = error_variance_harmonic(cfg, hbar);
  const double period = 2.0 * pi / cfg.omega;
  const double r_ratio =
      std::abs(err.integrals.cos_weighted) / std::abs(err.integrals.potential);

  BoundReport r;
  r.epsilon = epsilon;
  r.phase = err.integrals.potential / hbar;
  r.error = err.delta_sq;
  r.energy = cfg.m * cfg.omega * cfg.omega * cfg.A * cfg.A;
  r.bound = hbar / (epsilon * period);
  r.calibrated = std::abs(r.phase - pi) <= 1e-9;
  r.premise_met = r.error <= epsilon;
  r.satisfied = r.energy >= r.bound;
  r.metrics["coupling"] = err.coupling;
  r.metrics["sin_weighted"] = err.integrals.sin_weighted;
  r.metrics["cos_weighted"] = err.integrals.cos_weighted;
  r.metrics["b_R"] = cfg.b * r_ratio;
  r.metrics["A_over_b"] = cfg.A / cfg.b;
  r.metrics["dx0_sq"] = err.dx0_sq;
  r.metrics["squeeze_r"] = cfg.squeeze_r;
  r.metrics["effective_duration"] = err.integrals.effective_duration;
  // energy / bound when epsilon = delta^2 and A = b: 2 pi^3 (b R)^2.
  r.metrics["boundary_slack"] = 2.0 * pi * pi * pi * (cfg.b * r_ratio) * (cfg.b * r_ratio);
  r.notes["regime"] = cfg.A > cfg.b ? "A > b" : "A <= b: outside the intended regime";
  r.notes["energy"] = "m omega^2 A^2 for both oscillators; loading the motion is not counted";
  r.notes["effective_duration"] = "RMS width of V(rho(t)); diagnostic only";
  if (cfg.squeeze_r != 0.0) {
    r.notes["squeezing"] = "dx0^2 reduced by e^{-2r}; higher orders not included";
  }
  if (!r.premise_met) r.notes["bound"] = "delta^2 exceeds epsilon; bound not required";
  return r;
}

ReturnMismatch classical_return_mismatch(const HarmonicCollisionConfig& cfg, double hbar,
                                         double coupling_scale, double tol) {
  validate(cfg);
  ReturnMismatch out;
  out.coupling = coupling_scale == 0.0 ? 0.0 : coupling_scale * calibrate_coupling(cfg, hbar);
  const auto v = cfg.potential.with_coupling(out.coupling);
  const auto tr = harmonic_trajectories(cfg);

  // Scaled variables: X = x / A, P = p / (m omega A), tau = omega t.
  const double c1 = -(cfg.A + 0.5 * cfg.b) / cfg.A;
  const double c2 = (cfg.A + 0.5 * cfg.b) / cfg.A;
  const double force_scale = 1.0 / (cfg.m * cfg.omega * cfg.omega * cfg.A);
  auto rhs = [&](double, const numerics::OdeState& y, numerics::OdeState& dy) {
    const double rho = (y[1] - y[0]) * cfg.A;
    const double dv = v.derivative(rho) * force_scale;
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = -(y[0] - c1) + dv;
    dy[3] = -(y[1] - c2) - dv;
  };
  auto energy = [&](const numerics::OdeState& y) {
    const double trap = 0.5 * (y[2] * y[2] + y[3] * y[3]) +
                        0.5 * ((y[0] - c1) * (y[0] - c1) + (y[1] - c2) * (y[1] - c2));
    return trap + v.value((y[1] - y[0]) * cfg.A) * force_scale / cfg.A;
  };
  const numerics::OdeState y0{tr.x1(0.0) / cfg.A, tr.x2(0.0) / cfg.A, 0.0, 0.0};
  numerics::OdeOptions opts;
  opts.rel_tol = tol;
  opts.abs_tol = tol;
  numerics::OdeResult res;
  try {
    res = numerics::integrate_dopri5(rhs, y0, 0.0, 2.0 * pi, opts);
  } catch (const IntegrationFailure& e) {
    std::ostringstream msg;
    msg << "classical_return_mismatch: close encounter too stiff (b = " << cfg.b
        << ", C = " << out.coupling << "): " << e.what();
    throw IntegrationFailure(msg.str());
  }
  out.dx = (res.y[1] - y0[1]) * cfg.A;
  out.dp = res.y[3] * cfg.m * cfg.omega * cfg.A;
  out.energy_drift = std::abs(energy(res.y) - energy(y0)) / std::abs(energy(y0));
  out.steps = res.accepted;
  return out;
}

SqueezingProbe squeezing_consistency_probe(const HarmonicCollisionConfig& cfg, double epsilon,
                                           double hbar) {
  if (!(epsilon > 0.0)) throw ValidationError("squeezing_consistency_probe: epsilon > 0");
  SqueezingProbe out;
  const double coupling = cfg.potential.coupling();
  out.mismatch = classical_return_mismatch(cfg, hbar, coupling == 0.0 ? 0.0 : 1.0);
  if (coupling == 0.0) return out;
  out.leading = error_variance_harmonic(cfg, hbar).delta_sq;
  const double amp = std::exp(2.0 * cfg.squeeze_r);
  // Position mis-overlap against the squeezed width dx0^2 = e^{-2r} hbar / 2 m omega.
  out.proxy = 2.0 * cfg.m * cfg.omega * out.mismatch.dx * out.mismatch.dx * amp / hbar;
  out.dp_proxy = out.mismatch.dp * out.mismatch.dp * amp / (cfg.m * cfg.omega * hbar);
  out.ratio = out.leading > 0.0 ? out.proxy / out.leading : 0.0;
  out.flagged = out.ratio > 0.1;
  return out;
}

} // namespace gatebound::collision
