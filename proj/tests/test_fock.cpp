// Truncated oscillator states and the time-ordered propagator.
// Dense matrix exponentials from Eigen serve as the oracle.

#include "gatebound/error.hpp"
#include "gatebound/fock/evolve.hpp"
#include "gatebound/fock/operator.hpp"
#include "gatebound/fock/state.hpp"

#include "doctest.h"

#include <boost/math/special_functions/factorials.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace gatebound;
using fock::cplx;
using fock::OperatorMatrix;

namespace {

Eigen::MatrixXcd to_eigen(const OperatorMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.cutoff());
  Eigen::MatrixXcd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m(i, j);
  return e;
}

Eigen::VectorXcd to_eigen(const fock::ControlState& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.cutoff()));
  for (std::size_t i = 0; i < s.cutoff(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

double distance(const fock::ControlState& s, const Eigen::VectorXcd& v) {
  return (to_eigen(s) - v).norm();
}

} // namespace

TEST_CASE("ladder operators obey the truncated commutator") {
  const std::size_t n = 12;
  const auto [a, ad] = fock::ladder_operators(n);
  const auto comm = a * ad - ad * a;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double want = i == j ? (i + 1 == n ? 1.0 - static_cast<double>(n) : 1.0) : 0.0;
      CHECK(std::abs(comm(i, j) - want) < 1e-13);
    }
  }
  const auto num = fock::number_operator(n);
  const auto prod = ad * a;
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(num(i, i) - prod(i, i)) < 1e-13);
  CHECK((a + ad).is_hermitian());
  CHECK_FALSE(a.is_hermitian());
  // Largest row sum sits in row n-2: sqrt(n-2) + sqrt(n-1).
  CHECK((a + ad).norm_inf() == doctest::Approx(std::sqrt(10.0) + std::sqrt(11.0)).epsilon(1e-14));
}

TEST_CASE("norm_inf and combine against direct evaluation") {
  const auto [a, ad] = fock::ladder_operators(9);
  const auto c = OperatorMatrix::combine(2.0, a, -0.5, ad);
  const auto ref = 2.0 * a - 0.5 * ad;
  double worst = 0.0, rows = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
      worst = std::max(worst, std::abs(c(i, j) - ref(i, j)));
      s += std::abs(c(i, j));
    }
    rows = std::max(rows, s);
  }
  CHECK(worst < 1e-15);
  CHECK(c.norm_inf() == doctest::Approx(rows).epsilon(1e-14));
}

TEST_CASE("coherent cutoff rule") {
  CHECK(fock::coherent_cutoff(0.0) == 32);
  CHECK(fock::coherent_cutoff(1.0) == 33);
  CHECK(fock::coherent_cutoff(10.0) == static_cast<std::size_t>(std::ceil(100.0 + 120.0 + 20.0)));
  CHECK_THROWS_AS(fock::coherent_state(4.0, 20), CutoffInsufficientError);
  CHECK_NOTHROW(fock::coherent_state(4.0, 20, fock::CutoffPolicy::override_rule));
}

TEST_CASE("coherent states: normalization, moments and overlaps") {
  const cplx alpha{2.0, -1.0}, beta{1.5, 0.5};
  const std::size_t n = fock::coherent_cutoff(3.0);
  const auto sa = fock::coherent_state(alpha, n);
  const auto sb = fock::coherent_state(beta, n);
  CHECK(sa.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
  const auto m = fock::ladder_moments(sa);
  CHECK(std::abs(m.a - alpha) < 1e-10);
  CHECK(m.n == doctest::Approx(std::norm(alpha)).epsilon(1e-10));
  const double ov = std::norm(fock::overlap(sa, sb));
  CHECK(ov == doctest::Approx(std::exp(-std::norm(alpha - beta))).epsilon(1e-10));
  const auto [vx, vp] = fock::quadrature_variances(sa);
  CHECK(vx == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(vp == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fock::overlap(sa, sb) == std::conj(fock::overlap(sb, sa)));
  CHECK_THROWS_AS(fock::overlap(sa, fock::coherent_state(alpha, n + 1)), DimensionError);
}

TEST_CASE("coherent state amplitudes and the truncated Poisson tail") {
  const auto vac = fock::coherent_state(0.0, 8, fock::CutoffPolicy::override_rule);
  CHECK(vac[0] == cplx(1.0));
  for (std::size_t k = 1; k < 8; ++k) CHECK(vac[k] == cplx(0.0));
  CHECK(fock::ladder_moments(fock::coherent_state(2.0, fock::coherent_cutoff(2.0))).n ==
        doctest::Approx(4.0).epsilon(1e-10));

  // Poisson mass missing beyond the rule's cutoff, summed in 50 digits.
  using mp = boost::multiprecision::cpp_bin_float_50;
  const double alpha = 1.5;
  const std::size_t n = fock::coherent_cutoff(alpha);
  const auto s = fock::coherent_state(alpha, n);
  const mp lambda = mp(alpha) * alpha;
  mp term = boost::multiprecision::exp(-lambda), kept = 0;
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(std::norm(s[k]) == doctest::Approx(static_cast<double>(term)).epsilon(1e-11));
    kept += term;
    term *= lambda / mp(k + 1);
  }
  CHECK(static_cast<double>(1 - kept) < 1e-12);
}

TEST_CASE("number states and index checks") {
  const auto s = fock::number_state(3, 6);
  CHECK(s[3] == cplx(1.0));
  CHECK(fock::ladder_moments(s).n == doctest::Approx(3.0));
  CHECK_THROWS_AS(fock::number_state(6, 6), IndexError);
}

TEST_CASE("squeezed coherent state has the requested quadrature variances") {
  for (const double r : {0.0, 0.3, 0.8}) {
    const auto s = fock::squeezed_coherent_state(cplx(1.0, 0.5), r, 120);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    const auto [vx, vp] = fock::quadrature_variances(s);
    CHECK(vx == doctest::Approx(std::exp(-2.0 * r) / 2.0).epsilon(1e-8));
    CHECK(vp == doctest::Approx(std::exp(2.0 * r) / 2.0).epsilon(1e-8));
    const auto m = fock::ladder_moments(s);
    CHECK(std::abs(m.a - cplx(1.0, 0.5)) < 1e-8);
    // <n> = |alpha|^2 + sinh^2 r
    CHECK(m.n == doctest::Approx(1.25 + std::sinh(r) * std::sinh(r)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(fock::squeezed_coherent_state(cplx(3.0), 1.5, 20), CutoffInsufficientError);
}

TEST_CASE("expm_action matches the dense exponential") {
  const std::size_t n = 30;
  const auto [a, ad] = fock::ladder_operators(n);
  const auto k = 0.7 * (a + ad) + 0.2 * fock::number_operator(n);
  const auto psi = fock::coherent_state(1.2, n, fock::CutoffPolicy::override_rule);
  const auto out = fock::expm_action(
      [&](std::span<const cplx> x, std::span<cplx> y) { k.apply(x, y); }, k.norm_inf(),
      psi.amplitudes());
  const Eigen::MatrixXcd u = (cplx(0.0, -1.0) * to_eigen(k)).exp();
  const Eigen::VectorXcd ref = u * to_eigen(psi);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(out[i] - ref(static_cast<Eigen::Index>(i))));
  CHECK(d < 1e-12);
}

TEST_CASE("time-independent evolution agrees with Eigen for both schemes") {
  const std::size_t n = 24;
  const auto [a, ad] = fock::ladder_operators(n);
  const auto h = fock::number_operator(n) + 0.4 * (a + ad);
  const auto psi = fock::coherent_state(0.8, n, fock::CutoffPolicy::override_rule);
  const Eigen::VectorXcd ref = (cplx(0.0, -2.5) * to_eigen(h)).exp() * to_eigen(psi);
  for (const auto scheme : {fock::StepScheme::magnus4, fock::StepScheme::midpoint}) {
    fock::EvolveOptions o;
    o.scheme = scheme;
    o.tol = 1e-9;
    const auto res = fock::evolve_with_stats(psi, fock::constant_hamiltonian(h), 0.0, 2.5, o);
    CHECK(distance(res.state, ref) < 1e-8);
    CHECK(res.state.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("free evolution: zero Hamiltonian and rotation of a coherent state") {
  const std::size_t n = fock::coherent_cutoff(std::abs(cplx(1.3, 0.4)));
  const auto psi = fock::coherent_state(cplx(1.3, 0.4), n);
  const auto same = fock::evolve(psi, fock::constant_hamiltonian(OperatorMatrix::zero(n)), 0.0, 3.0,
                                 1e-10);
  CHECK(std::abs(fock::overlap(psi, same) - 1.0) < 1e-14);
  const double w = 0.7, t = 2.2;
  const auto out = fock::evolve(psi, fock::constant_hamiltonian(w * fock::number_operator(n)), 0.0, t, 1e-10);
  const auto rotated = fock::coherent_state(cplx(1.3, 0.4) * std::polar(1.0, -w * t), n);
  CHECK(std::abs(fock::overlap(rotated, out)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tightening the tolerance never moves away from a finer reference") {
  const std::size_t n = 30;
  const auto [a, ad] = fock::ladder_operators(n);
  const OperatorMatrix x = a + ad, num = fock::number_operator(n);
  auto h = [&](double t) -> OperatorMatrix { return num + (0.5 * std::cos(3.0 * t)) * x; };
  const auto psi = fock::coherent_state(0.6, n, fock::CutoffPolicy::override_rule);
  const auto ref = fock::evolve(psi, h, 0.0, 4.0, 1e-13);
  const Eigen::VectorXcd r = to_eigen(ref);
  auto dev = [&](double tol) { return distance(fock::evolve(psi, h, 0.0, 4.0, tol), r); };
  // Stay well above the reference's own error.
  double prev = dev(1e-5);
  for (double tol = 5e-6; tol >= 1e-11; tol *= 0.5) {
    const double d = dev(tol);
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("driven oscillator reproduces the displaced state") {
  // H = f(t) (a + a_dag) with real f = g sin(pi t / T) commutes with itself,
  // so U = D(beta) with beta = -i int f, and D(beta)|a> = exp(i Im(beta conj a))|a + beta>.
  const std::size_t n = 60;
  const double g = 1.3, T = 2.0;
  const auto [a, ad] = fock::ladder_operators(n);
  const auto x = a + ad;
  auto h = [&](double t) { return (g * std::sin(std::numbers::pi * t / T)) * x; };
  const auto psi = fock::coherent_state(0.5, n);
  const auto out = fock::evolve(psi, h, 0.0, T, 1e-11);
  const double area = 2.0 * g * T / std::numbers::pi;
  const auto expect = fock::coherent_state(cplx(0.5, -area), n);
  CHECK(std::abs(fock::overlap(expect, out) - std::polar(1.0, -0.5 * area)) < 1e-8);
}

TEST_CASE("evolution gives up when the step budget runs out") {
  const auto [a, ad] = fock::ladder_operators(40);
  // A constant H is integrated exactly, so the drive has to oscillate.
  const fock::OperatorMatrix x = a + ad;
  auto h = [&](double t) -> fock::OperatorMatrix { return (1e2 * std::cos(40.0 * t)) * x; };
  fock::EvolveOptions o;
  o.max_steps = 5;
  const auto psi = fock::number_state(0, 40);
  CHECK_THROWS_AS(fock::evolve_with_stats(psi, h, 0.0, 10.0, o), IntegrationFailure);
}

TEST_CASE("non-Hermitian generators are rejected") {
  const auto [a, ad] = fock::ladder_operators(5);
  CHECK_THROWS_AS(fock::require_hermitian(a, "test"), ValidationError);
  CHECK_NOTHROW(fock::require_hermitian(a + ad, "test"));
}
