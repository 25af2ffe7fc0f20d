// Free and harmonic-trap collisions against closed forms, boost quadrature
// and an independent odeint integration of the two-body motion.

#include "gatebound/collision/collision.hpp"
#include "gatebound/error.hpp"

#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>

using namespace gatebound;
using collision::FreeCollisionConfig;
using collision::HarmonicCollisionConfig;
using collision::PotentialLaw;
using std::numbers::pi;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

FreeCollisionConfig free_config(double n = 2.0) {
  FreeCollisionConfig c;
  c.m = 1e4;
  c.v = 2.0;
  c.b = 1.0;
  c.T = 10.0;
  c.potential = PotentialLaw::power_law(n, 1.0);
  return c;
}

HarmonicCollisionConfig harmonic_config() {
  HarmonicCollisionConfig c;
  c.m = 1e5;
  c.omega = 1.0;
  c.A = 1.0;
  c.b = 0.05;
  c.potential = PotentialLaw::power_law(3.0, 1.0);
  return c;
}

// Integral over one trap period, split around closest approach.
template <class F>
double period_integral(const F& f, const HarmonicCollisionConfig& c) {
  const double mid = pi / c.omega, w = std::sqrt(c.b / c.A) / c.omega;
  const double cuts[] = {0.0, mid - 8 * w, mid - w, mid, mid + w, mid + 8 * w, 2 * pi / c.omega};
  double s = 0.0;
  for (int i = 0; i + 1 < 7; ++i) s += GK::integrate(f, cuts[i], cuts[i + 1], 30, 1e-14);
  return s;
}

} // namespace

TEST_CASE("power-law potential validation") {
  CHECK_THROWS_AS(PotentialLaw::power_law(1.0, 1.0), ValidationError);
  const auto v = PotentialLaw::power_law(2.5, 3.0);
  CHECK(v.value(2.0) == doctest::Approx(3.0 * std::pow(2.0, -2.5)));
  CHECK(v.derivative(2.0) == doctest::Approx(-2.5 * 3.0 * std::pow(2.0, -3.5)));
  CHECK(v.with_coupling(7.0).coupling() == 7.0);
  CHECK(*v.exponent() == 2.5);
  CHECK_NOTHROW(v.check_decay(1.0));
  const auto flat = PotentialLaw::custom([](double) { return 1.0; }, [](double) { return 0.0; });
  CHECK_THROWS_AS(flat.check_decay(1.0), ValidationError);
  CHECK_FALSE(flat.exponent().has_value());
}

TEST_CASE("free collision geometry validation") {
  auto c = free_config();
  c.b = 25.0; // b >= v T
  CHECK_THROWS_AS(collision::validate(c), ValidationError);
  c = free_config();
  c.m = -1.0;
  CHECK_THROWS_AS(collision::validate(c), ValidationError);
}

TEST_CASE("free phase integral: closed form for n = 2 and symmetric evaluation") {
  const auto c = free_config(2.0);
  // int dt / (4 v^2 t^2 + b^2) over [-T/2, T/2] = atan(v T / b) / (v b)
  const double exact = std::atan(c.v * c.T / c.b) / (c.v * c.b);
  CHECK(collision::phase_integral_free(c) == doctest::Approx(exact).epsilon(1e-12));
  for (const double n : {1.5, 3.0, 6.0}) {
    const auto cn = free_config(n);
    CHECK(collision::phase_integral_free(cn, 1.0, true) ==
          doctest::Approx(collision::phase_integral_free(cn, 1.0, false)).epsilon(1e-12));
  }
  // The full-line value C pi / (2 v b) is approached from below as T grows.
  const double full = pi / (2 * c.v * c.b);
  double prev = 0.0;
  for (const double T : {10.0, 100.0, 1e4}) {
    auto ct = c;
    ct.T = T;
    const double ph = collision::phase_integral_free(ct);
    CHECK(ph < full);
    CHECK(ph > prev);
    prev = ph;
  }
  CHECK(prev == doctest::Approx(full).epsilon(1e-4));
  auto doubled = c;
  doubled.potential = c.potential.with_coupling(2.0);
  CHECK(collision::phase_integral_free(doubled) == doctest::Approx(2.0 * exact).epsilon(1e-13));
  auto off = c;
  off.potential = c.potential.with_coupling(0.0);
  CHECK(collision::phase_integral_free(off) == 0.0);
}

TEST_CASE("calibrated coupling gives phase pi and scales as expected") {
  auto c = free_config(3.0);
  const double cstar = collision::calibrate_coupling(c, 1.0);
  auto cal = c;
  cal.potential = c.potential.with_coupling(cstar);
  CHECK(collision::phase_integral_free(cal) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(collision::calibrate_coupling(c, 2.0) == doctest::Approx(2.0 * cstar).epsilon(1e-12));
  // Doubling v while halving T keeps v T, so the phase integral halves and C* doubles.
  auto fast = c;
  fast.v *= 2.0;
  fast.T /= 2.0;
  CHECK(collision::calibrate_coupling(fast) == doctest::Approx(2.0 * cstar).epsilon(1e-10));
  // Unit coupling giving phase pi/2 calibrates to C* = 2.
  auto half = c;
  half.potential = c.potential.with_coupling(0.5 * cstar);
  CHECK(collision::calibrate_coupling(half) == doctest::Approx(2.0 * half.potential.coupling()).epsilon(1e-12));
}

TEST_CASE("force integral and error variance against quadrature") {
  auto c = free_config(2.0);
  c.potential = c.potential.with_coupling(collision::calibrate_coupling(c));
  auto integrand = [&](double t) {
    const double rho = std::sqrt(4 * c.v * c.v * t * t + c.b * c.b);
    return c.potential.derivative(rho) / rho;
  };
  const double ref = 2.0 * GK::integrate(integrand, 0.0, c.T / 2.0, 30, 1e-14);
  CHECK(collision::force_integral_free(c) == doctest::Approx(ref).epsilon(1e-10));
  const double dx = 0.03, dp = 30.0;
  const double want = std::pow(c.b * ref, 2) * (dx * dx + c.T * c.T * dp * dp / (4 * c.m * c.m));
  CHECK(collision::error_variance_free(c, dx, dp) == doctest::Approx(want).epsilon(1e-10));
  CHECK_THROWS_AS(collision::error_variance_free(c, 0.1, 1.0), UncertaintyViolationError);
  double prev = 0.0;
  for (const double x : {0.03, 0.1, 0.3}) {
    const double d = collision::error_variance_free(c, x, dp);
    CHECK(d > prev);
    prev = d;
  }

  // n = 3 against an independent quadrature of the untruncated window.
  auto c3 = free_config(3.0);
  c3.potential = c3.potential.with_coupling(collision::calibrate_coupling(c3));
  auto f3 = [&](double t) {
    const double rho = std::sqrt(4 * c3.v * c3.v * t * t + c3.b * c3.b);
    return c3.potential.derivative(rho) / rho;
  };
  const double w = c3.b / c3.v;
  const double r3 = 2.0 * (GK::integrate(f3, 0.0, w, 15, 1e-13) + GK::integrate(f3, w, c3.T / 2, 15, 1e-13));
  CHECK(collision::force_integral_free(c3) == doctest::Approx(r3).epsilon(1e-10));
  CHECK(collision::error_variance_free(c3, dx, dp) ==
        doctest::Approx(std::pow(c3.b * r3, 2) * (dx * dx + c3.T * c3.T * dp * dp / (4 * c3.m * c3.m)))
            .epsilon(1e-8));
}

TEST_CASE("log-derivative of the transverse integral") {
  for (const double n : {1.5, 2.0, 3.0, 4.0, 6.0}) {
    for (const double b : {0.5, 1.0, 3.0}) {
      const auto chk = collision::powerlaw_log_derivative_check(n, b);
      CHECK(chk.analytic == doctest::Approx(-(n - 1.0) / b).epsilon(1e-15));
      CHECK(chk.relative_difference < 1e-6);
      CHECK(collision::powerlaw_log_derivative(n, b) == chk.analytic);
    }
  }
  CHECK(collision::powerlaw_log_derivative(3.0, 2.0) == doctest::Approx(-1.0));
  CHECK(collision::powerlaw_log_derivative(2.0, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("optimal wavepacket minimizes the spread") {
  const double m = 3.0, T = 7.0;
  const auto w = collision::optimal_wavepacket(m, T);
  CHECK(std::abs(w.objective - T / (2 * m)) < 1e-12);
  CHECK(w.dx0_sq * w.dp0_sq == doctest::Approx(0.25).epsilon(1e-14));
  // Any other point on dx dp = hbar/2 does worse.
  for (const double f : {0.5, 0.9, 1.1, 2.0}) {
    const double dx2 = w.dx0_sq * f, dp2 = 0.25 / dx2;
    CHECK(dx2 + T * T * dp2 / (4 * m * m) > w.objective);
  }
}

TEST_CASE("free energy bound: chain error and grid property") {
  const auto c = free_config(2.0);
  const auto r = collision::free_energy_bound(c, 0.01);
  CHECK(r.calibrated);
  CHECK(r.error == doctest::Approx(pi * pi * c.T / (2 * c.m)).epsilon(1e-12));
  CHECK(r.energy == doctest::Approx(c.m * c.v * c.v));
  CHECK(r.bound == doctest::Approx(1.0 / (0.01 * c.T)));
  CHECK(r.metrics.at("error_finite_window") == doctest::Approx(r.error).epsilon(0.1));
  CHECK(r.metrics.at("dp0_sq_quoted") == doctest::Approx(2.0 * r.metrics.at("dp0_sq_optimal")));
  for (const double m : {1e2, 1e3, 1e4, 1e5}) {
    for (const double v : {0.5, 1.0, 3.0}) {
      for (const double b : {0.3, 1.0, 2.5}) {
        for (const double n : {1.5, 2.0, 4.0}) {
          FreeCollisionConfig g{m, v, b, 10.0, PotentialLaw::power_law(n, 1.0)};
          const auto gr = collision::free_energy_bound(g, 0.05);
          if (gr.premise_met) {
            REQUIRE(gr.satisfied);
          }
        }
      }
    }
  }
}

TEST_CASE("free energy bound at the b = vT boundary") {
  // With epsilon = delta^2 the ratio is (n-1)^2 pi^2 / 2 (vT/b)^2.
  for (const double n : {2.0, 3.0}) {
    auto c = free_config(n);
    c.b = 0.999 * c.v * c.T;
    const double err = collision::free_energy_bound(c, 0.5).error;
    const auto r = collision::free_energy_bound(c, err);
    const double want = std::pow(n - 1, 2) * pi * pi / 2 * std::pow(c.v * c.T / c.b, 2);
    CHECK(r.ratio() == doctest::Approx(want).epsilon(1e-12));
    CHECK(r.satisfied);
  }
}

TEST_CASE("harmonic trajectories and integrals") {
  const auto c = harmonic_config();
  const auto tr = collision::harmonic_trajectories(c);
  for (const double t : {0.0, 1.0, pi, 5.0}) {
    CHECK(tr.rho(t) == doctest::Approx(tr.x2(t) - tr.x1(t)).epsilon(1e-12));
  }
  CHECK(tr.rho(pi) == doctest::Approx(c.b).epsilon(1e-12));
  CHECK(tr.rho(0.0) == doctest::Approx(4 * c.A + c.b).epsilon(1e-14));
  for (const double d : {0.1, 0.7, 2.0}) CHECK(tr.rho(pi - d) == doctest::Approx(tr.rho(pi + d)).epsilon(1e-13));
  const auto hi = collision::harmonic_integrals(c);
  const double pot = period_integral([&](double t) { return c.potential.value(tr.rho(t)); }, c);
  const double cw = period_integral(
      [&](double t) { return c.potential.derivative(tr.rho(t)) * std::cos(t); }, c);
  CHECK(hi.potential == doctest::Approx(pot).epsilon(1e-10));
  CHECK(hi.cos_weighted == doctest::Approx(cw).epsilon(1e-10));
  CHECK(std::abs(hi.sin_weighted) < 1e-9 * std::abs(hi.cos_weighted));
}

TEST_CASE("harmonic calibration and error variance") {
  auto c = harmonic_config();
  const double cstar = collision::calibrate_coupling(c);
  auto cal = c;
  cal.potential = c.potential.with_coupling(cstar);
  CHECK(collision::harmonic_integrals(cal).potential == doctest::Approx(pi).epsilon(1e-12));
  const auto e = collision::error_variance_harmonic(c);
  CHECK(e.coupling == doctest::Approx(cstar));
  CHECK(e.dx0_sq == doctest::Approx(1.0 / (2.0 * c.m * c.omega)));
  const double cw = e.integrals.cos_weighted;
  CHECK(e.delta_sq == doctest::Approx(2.0 * cw * cw * e.dx0_sq).epsilon(1e-12));
  // Position squeezing lowers the error by e^{-2r}.
  c.squeeze_r = 0.5;
  CHECK(collision::error_variance_harmonic(c).delta_sq ==
        doctest::Approx(e.delta_sq * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("dipole limit b R(b) -> 5/2") {
  const auto d = collision::dipole_leading_ratio(harmonic_config());
  CHECK(std::abs(d.extrapolated - 2.5) < 0.01);
  CHECK(d.b_r[0] < d.b_r[1]);
  CHECK(d.b_r[1] < d.b_r[2]);
  CHECK(std::abs(d.b_r[2] - 2.5) < 1e-3);
  CHECK(std::abs(d.b_r[0] - 2.5) < 0.05 * 2.5);
  // C cancels in the ratio.
  auto strong = harmonic_config();
  strong.potential = strong.potential.with_coupling(40.0);
  const auto ds = collision::dipole_leading_ratio(strong);
  CHECK(ds.b_r_config == doctest::Approx(d.b_r_config).epsilon(1e-12));
  CHECK(ds.extrapolated == doctest::Approx(d.extrapolated).epsilon(1e-12));
}

TEST_CASE("harmonic energy bound metadata") {
  const auto c = harmonic_config();
  const auto r = collision::harmonic_energy_bound(c, 1.0);
  CHECK(r.energy == doctest::Approx(c.m));
  CHECK(r.bound == doctest::Approx(1.0 / (2 * pi)));
  const double br = r.metrics.at("b_R");
  CHECK(r.metrics.at("boundary_slack") == doctest::Approx(2 * pi * pi * pi * br * br));
  CHECK(r.satisfied);
  CHECK(collision::harmonic_energy_bound(c, 0.999).satisfied);
}

TEST_CASE("return mismatch against first-order response and an odeint run") {
  const auto c = harmonic_config();
  const auto full = collision::classical_return_mismatch(c, 1.0, 1.0);
  const auto half = collision::classical_return_mismatch(c, 1.0, 0.5);
  const auto off = collision::classical_return_mismatch(c, 1.0, 0.0);

  // First-order momentum kick on particle 2: -int V' cos(omega t) dt.
  const auto e = collision::error_variance_harmonic(c);
  CHECK(full.dp == doctest::Approx(-e.integrals.cos_weighted).epsilon(0.02));
  CHECK(full.dp / half.dp == doctest::Approx(2.0).epsilon(0.05));
  // Position returns at second order: the sin-weighted term vanishes.
  CHECK(full.dx / half.dx == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::abs(off.dp) < 1e-6 * std::abs(full.dp));
  CHECK(off.energy_drift < 1e-8);
  // Without interaction the return is exact up to the integrator tolerance.
  CHECK(std::abs(off.dx) < 1e-8 * c.A);
  CHECK(std::abs(off.dp) < 1e-8 * c.m * c.omega * c.A);
  // The calibrated return misses by far more than the integrator tolerance.
  CHECK(std::abs(full.dx) > 1e3 * 1e-10 * c.A);

  // Independent integration in physical variables (x1, x2, p1, p2).
  using state = std::array<double, 4>;
  const auto v = c.potential.with_coupling(full.coupling);
  const double s = c.A + 0.5 * c.b;
  auto rhs = [&](const state& y, state& d, double) {
    const double f = v.derivative(y[1] - y[0]);
    d[0] = y[2] / c.m;
    d[1] = y[3] / c.m;
    d[2] = -c.m * c.omega * c.omega * (y[0] + s) + f;
    d[3] = -c.m * c.omega * c.omega * (y[1] - s) - f;
  };
  state y{-(s + c.A), s + c.A, 0.0, 0.0};
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_dopri5<state>()), rhs,
                          y, 0.0, 2 * pi / c.omega, 1e-4);
  CHECK(y[3] == doctest::Approx(full.dp).epsilon(1e-5));
  CHECK(y[1] - (s + c.A) == doctest::Approx(full.dx).epsilon(1e-3));
}

TEST_CASE("squeezing consistency probe") {
  auto c = harmonic_config();
  const auto p = collision::squeezing_consistency_probe(c, 1e-4);
  CHECK_FALSE(p.flagged);
  CHECK(p.ratio < 1e-3);
  CHECK(p.leading == doctest::Approx(collision::error_variance_harmonic(c).delta_sq));
  c.m = 1e4;
  c.squeeze_r = -0.5 * std::log(std::sqrt(1e-4));
  const auto q = collision::squeezing_consistency_probe(c, 1e-4);
  CHECK(q.flagged);
  c.potential = c.potential.with_coupling(0.0);
  const auto z = collision::squeezing_consistency_probe(c, 1e-4);
  CHECK(z.proxy == 0.0);
  CHECK_FALSE(z.flagged);
}
