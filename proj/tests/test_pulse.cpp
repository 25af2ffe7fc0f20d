// Multimode pulse bounds and the power-P reduction. The adversarial search
// must never beat the bound.

#include "gatebound/error.hpp"
#include "gatebound/gate/drive.hpp"
#include "gatebound/numerics/rng.hpp"
#include "gatebound/pulse/pulse.hpp"

#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>

using namespace gatebound;
using pulse::cplx;
using std::numbers::pi;

namespace {

cplx gk_complex(const std::function<cplx(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double re = GK::integrate([&](double t) { return f(t).real(); }, a, b, 12, 1e-13);
  const double im = GK::integrate([&](double t) { return f(t).imag(); }, a, b, 12, 1e-13);
  return {re, im};
}

} // namespace

TEST_CASE("mode integral: closed form, quadrature and the small-omega limit") {
  for (const double w : {0.3, 1.0, 7.5, 40.0}) {
    const auto ref = gk_complex([&](double t) { return std::polar(1.0, -w * t); }, 0.2, 1.7);
    CHECK(std::abs(pulse::mode_integral(w, 0.2, 1.7) - ref) < 1e-13);
  }
  // Against a 50-digit evaluation where cancellation would hurt a naive formula.
  using mp = boost::multiprecision::cpp_bin_float_50;
  const double w = 1e-7, a = 3.0, b = 3.5;
  const mp wm = w;
  const mp re = (boost::multiprecision::sin(wm * b) - boost::multiprecision::sin(wm * a)) / wm;
  const mp im = (boost::multiprecision::cos(wm * b) - boost::multiprecision::cos(wm * a)) / wm;
  const auto j = pulse::mode_integral(w, a, b);
  CHECK(j.real() == doctest::Approx(static_cast<double>(re)).epsilon(1e-15));
  CHECK(j.imag() == doctest::Approx(static_cast<double>(im)).epsilon(1e-9));
}

TEST_CASE("minimum photon number") {
  CHECK(pulse::min_photon_number(0.01) == doctest::Approx(246.7401100272).epsilon(1e-12));
  CHECK(std::abs(pulse::min_photon_number(0.01) - 246.74) < 0.01);
  CHECK(pulse::min_photon_number(0.25) == doctest::Approx(pi * pi).epsilon(1e-14));
  CHECK_THROWS_AS(pulse::min_photon_number(0.0), ValidationError);
  CHECK_THROWS_AS(pulse::min_photon_number(1.0), ValidationError);
}

TEST_CASE("single-mode functionals on a symmetric window") {
  const double w = 3.0, T = 1.7, g = 0.4, a = 2.5;
  pulse::PulseSpec p;
  p.modes = {{w, g, a}};
  p.t_start = -T / 2;
  p.t_end = T / 2;
  const double j = 2.0 * std::sin(w * T / 2) / w;
  CHECK(pulse::phase_accumulated(p) == doctest::Approx(2.0 * g * a * j).epsilon(1e-13));
  CHECK(pulse::quantum_error(p) == doctest::Approx(g * g * j * j).epsilon(1e-13));
  // Both against direct quadrature of the time-domain integrals.
  const auto jq = gk_complex([&](double t) { return std::polar(1.0, -w * t); }, -T / 2, T / 2);
  CHECK(pulse::quantum_error(p) == doctest::Approx(std::norm(g * jq)).epsilon(1e-10));
  auto dark = p;
  dark.modes[0].alpha = 0.0;
  CHECK(pulse::phase_accumulated(dark) == 0.0);
  CHECK(pulse::quantum_error(dark) == pulse::quantum_error(p));
  dark.modes[0].g = 0.0;
  CHECK(pulse::quantum_error(dark) == 0.0);
}

TEST_CASE("photon number times error is at least pi^2/4 on calibrated pulses") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto p = pulse::random_feasible_pulse(numerics::derive_seed(77, i), 0.05, 1 + i % 4);
    REQUIRE(pulse::phase_accumulated(p) >= pi * (1.0 - 1e-12));
    CHECK(pulse::photon_number(p) * pulse::quantum_error(p) >= pi * pi / 4.0 * (1.0 - 1e-9));
    const double wbar = pulse::mean_omega(p);
    double lo = p.modes[0].omega, hi = lo;
    for (const auto& m : p.modes) {
      lo = std::min(lo, m.omega);
      hi = std::max(hi, m.omega);
    }
    CHECK(wbar >= lo);
    CHECK(wbar <= hi);
    CHECK(pulse::field_energy(p) >= lo * pulse::photon_number(p) * (1.0 - 1e-12));
  }
}

TEST_CASE("pulses above the error budget carry the premise flag") {
  const auto p = pulse::equality_pulse(2.0, 0.04, 0.0, 1.0);
  const auto r = pulse::energy_bound_check(p, 0.01);
  CHECK_FALSE(r.premise_met);
  CHECK(r.notes.count("bound") == 1);
}

TEST_CASE("single-mode equality construction saturates the bound") {
  for (const double eps : {0.1, 0.01, 1e-4}) {
    for (const double w : {0.5, 3.0}) {
      const auto p = pulse::equality_pulse(w, eps, 0.0, 2.0);
      const auto r = pulse::energy_bound_check(p, eps);
      CHECK(r.phase == doctest::Approx(pi).epsilon(1e-12));
      CHECK(r.error == doctest::Approx(eps).epsilon(1e-12));
      CHECK(r.ratio() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(r.satisfied);
      CHECK(r.premise_met);
      CHECK(r.calibrated);
      CHECK(*r.photon_number == doctest::Approx(pulse::min_photon_number(eps)).epsilon(1e-12));
    }
  }
}

TEST_CASE("random feasible pulses never beat the energy bound") {
  const double eps = 0.02;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto p = pulse::random_feasible_pulse(numerics::derive_seed(5, i), eps, 1 + i % 5);
    const auto r = pulse::energy_bound_check(p, eps);
    REQUIRE(r.calibrated);
    REQUIRE(r.error <= eps * (1.0 + 1e-12));
    REQUIRE(r.ratio() >= 1.0 - 1e-9);
    REQUIRE(r.satisfied);
  }
}

TEST_CASE("energy bound: unit scaling and linearity of the phase") {
  const auto p = pulse::random_feasible_pulse(3, 0.05, 4);
  const auto nat = pulse::energy_bound_check(p, 0.05, 1.0);
  const auto si = pulse::energy_bound_check(p, 0.05, 2.0);
  CHECK(si.energy == doctest::Approx(2.0 * nat.energy));
  CHECK(si.bound == doctest::Approx(2.0 * nat.bound));
  auto q = p;
  for (auto& m : q.modes) m.alpha *= 2.0;
  CHECK(pulse::phase_accumulated(q) == doctest::Approx(2.0 * pulse::phase_accumulated(p)));
  CHECK(pulse::quantum_error(q) == doctest::Approx(pulse::quantum_error(p)));
  CHECK(pulse::photon_number(q) == doctest::Approx(4.0 * pulse::photon_number(p)));
}

TEST_CASE("validation of pulses") {
  pulse::PulseSpec p;
  p.modes = {{-1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(pulse::validate(p), ValidationError);
  p.modes = {{1.0, 1.0, 1.0}};
  p.t_end = p.t_start;
  CHECK_THROWS_AS(pulse::validate(p), ValidationError);
}

TEST_CASE("P = 1 reduction reproduces the linear functionals") {
  const auto lin = pulse::random_feasible_pulse(11, 0.01, 3, 0.5, 20.0, 0.0, 1.5);
  const auto flat = pulse::sample_envelope([](double) { return 1.0; }, 0.0, 1.5, 2049);
  std::vector<pulse::WeightedMode> modes;
  std::vector<cplx> alphas;
  for (const auto& m : lin.modes) {
    modes.push_back({m.omega, std::abs(m.g)});
    alphas.push_back(m.alpha * m.g / std::abs(m.g));
  }
  const auto red = pulse::nonlinear_reduce(1, flat, modes);
  const auto a = pulse::energy_bound_check(lin, 0.01);
  const auto b = pulse::nonlinear_bound_check(red, alphas, 0.01);
  CHECK(b.phase == doctest::Approx(a.phase).epsilon(1e-12));
  CHECK(b.error == doctest::Approx(a.error).epsilon(1e-12));
  CHECK(b.energy == doctest::Approx(a.energy).epsilon(1e-12));
  CHECK(b.bound == doctest::Approx(a.bound).epsilon(1e-12));
  CHECK(b.metrics.at("linear_bound") == doctest::Approx(b.bound).epsilon(1e-15));
}

TEST_CASE("P = 2 coefficients against quadrature of the analytic envelope") {
  gate::Envelope env;
  env.duration = 1.0;
  env.sigma = 0.1;
  const auto s = pulse::sample_envelope([&](double t) { return env(t); }, 0.0, 1.0, 4097);
  const pulse::WeightedMode modes[] = {{7.0, 1.0}, {2.0, 0.3}};
  const auto red = pulse::nonlinear_reduce(2, s, modes);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto ref = modes[k].weight *
                     gk_complex([&](double t) { return env(t) * std::polar(1.0, -modes[k].omega * t); },
                                0.0, 1.0);
    CHECK(std::abs(red.coefficients[k] - ref) < 1e-9 * std::abs(ref) + 1e-13);
  }
  CHECK(red.refinement_change < 1e-8);
  const auto alphas = pulse::matched_amplitudes(red.coefficients);
  const auto r = pulse::nonlinear_bound_check(red, alphas, 0.01);
  CHECK(r.phase == doctest::Approx(pi).epsilon(1e-12));
  CHECK(r.bound == doctest::Approx(4.0 * r.metrics.at("linear_bound")).epsilon(1e-14));
  CHECK(r.metrics.at("power") == 2.0);
}

TEST_CASE("nonlinear reduction refuses under-resolved envelopes") {
  const auto s = pulse::sample_envelope([](double t) { return std::sin(200.0 * t); }, 0.0, 1.0, 21);
  CHECK(s.samples.size() % 4 == 1);
  const pulse::WeightedMode modes[] = {{150.0, 1.0}};
  CHECK_THROWS_AS(pulse::nonlinear_reduce(2, s, modes), SamplingError);
}

TEST_CASE("squeezing optimum: closed form and numeric minimizer") {
  const auto o = pulse::optimize_squeezing(1e-4, 1.0);
  CHECK(o.e_min == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(std::abs(o.r_star - 2.302585) < 1e-6);
  CHECK(o.r_star == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  CHECK(o.relative_disagreement < 1e-9);
  CHECK(std::abs(o.r_numeric - o.r_star) < 1e-7);
  for (const double eps : {0.5, 0.01, 1e-6}) {
    const auto q = pulse::optimize_squeezing(eps, 2.0, 3.0);
    CHECK(q.e_min == doctest::Approx(2.0 * 3.0 * 2.0 / std::sqrt(eps)).epsilon(1e-12));
    // The closed-form point is a stationary minimum of the energy curve.
    const double h = 1e-4;
    const double slope = (pulse::squeezed_energy(q.r_star + h, eps, 2.0, 3.0) -
                          pulse::squeezed_energy(q.r_star - h, eps, 2.0, 3.0)) / (2 * h);
    CHECK(std::abs(slope) < 1e-6 * q.e_min);
    CHECK(pulse::squeezed_energy(q.r_star + 1e-3, eps, 2.0, 3.0) > q.e_min);
    CHECK(pulse::squeezed_energy(q.r_star - 1e-3, eps, 2.0, 3.0) > q.e_min);
  }
  const auto mid = pulse::optimize_squeezing(0.01, 1.0);
  CHECK(mid.e_min == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(mid.r_star == doctest::Approx(1.151292546497).epsilon(1e-11));
  const auto one = pulse::optimize_squeezing(1.0, 1.0);
  CHECK(one.r_star == 0.0);
  CHECK(one.e_min == doctest::Approx(2.0));
  CHECK(pulse::squeezed_energy(0.0, 0.05, 1.5, 2.0) == doctest::Approx(3.0 * (1.0 / 0.05 + 1.0)));
  // Energy is symmetric under e^{2r} -> 1 / (e^{2r} epsilon).
  for (const double x : {0.3, 2.0, 40.0}) {
    const double eps = 0.02;
    CHECK(pulse::squeezed_energy(0.5 * std::log(x), eps, 1.0) ==
          doctest::Approx(pulse::squeezed_energy(0.5 * std::log(1.0 / (x * eps)), eps, 1.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(pulse::optimize_squeezing(0.0, 1.0), ValidationError);
}

TEST_CASE("linewidth combined bound") {
  const auto l = pulse::linewidth_combined_bound(2.0, 0.01);
  CHECK(l.omega_min == doctest::Approx(5.0));
  CHECK(l.derived_bound == doctest::Approx(100.0));
  CHECK(l.quoted_bound == doctest::Approx(50.0));
  const auto t1 = pulse::linewidth_combined_bound(1.0, 0.01);
  CHECK(t1.omega_min == doctest::Approx(10.0));
  CHECK(t1.derived_bound == doctest::Approx(200.0));
  CHECK(pulse::linewidth_combined_bound(3.0, 1.0 - 1e-12).derived_bound == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("adversarial search: bound holds, budget respected, parallelism-independent") {
  pulse::SearchOptions o;
  o.epsilon = 0.01;
  o.n_modes = 3;
  o.budget = 600;
  o.seed = 9;
  const auto a = pulse::adversarial_pulse_search(o);
  o.parallelism = 4;
  const auto b = pulse::adversarial_pulse_search(o);
  CHECK(a.evaluations == 600);
  CHECK(a.best_ratio >= 1.0 - 1e-9);
  CHECK(a.best_ratio == b.best_ratio);
  CHECK(a.restart_ratios == b.restart_ratios);
  CHECK(a.best.calibrated);
  CHECK(a.best.error <= o.epsilon * (1.0 + 1e-12));

  o.budget = 1;
  CHECK(pulse::adversarial_pulse_search(o).evaluations == 1);
  o.n_modes = 1;
  o.budget = 400;
  // With one mode the descent should close in on the equality case.
  CHECK(pulse::adversarial_pulse_search(o).best_ratio < 1.01);
}
