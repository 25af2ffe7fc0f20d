#include "gatebound/gate/engine.hpp"

#include "gatebound/error.hpp"
#include "gatebound/fock/evolve.hpp"
#include "gatebound/kernels/complex_kernels.hpp"
#include "gatebound/numerics/quadrature.hpp"
#include "gatebound/units.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gatebound::gate {
namespace {

using cvec = std::vector<cplx>;

void validate(const GateScenario& s) {
  if (!(s.duration > 0.0)) throw ValidationError("gate scenario: duration must be positive");
  const std::size_t n = s.control.cutoff();
  if (n == 0) throw ValidationError("gate scenario: empty control state");
  if (s.h0.cutoff() != n) throw DimensionError("gate scenario: H0 cutoff differs from control");
  fock::require_hermitian(s.h0, "H0");
  if (const auto* v = std::get_if<OperatorMatrix>(&s.v)) {
    if (v->cutoff() != n) throw DimensionError("gate scenario: V cutoff differs from control");
    fock::require_hermitian(*v, "V");
  } else if (!std::get<LinearDrive>(s.v).f) {
    throw ValidationError("gate scenario: linear drive has no function");
  }
}

Eigen::MatrixXcd to_eigen(const OperatorMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.cutoff());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

bool is_diagonal(const OperatorMatrix& m) {
  for (std::size_t i = 0; i < m.cutoff(); ++i)
    for (std::size_t j = 0; j < m.cutoff(); ++j)
      if (i != j && m(i, j) != cplx{}) return false;
  return true;
}

double lowest_eigenvalue(const OperatorMatrix& h) {
  if (is_diagonal(h)) {
    double lo = h(0, 0).real();
    for (std::size_t i = 1; i < h.cutoff(); ++i) lo = std::min(lo, h(i, i).real());
    return lo;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double control_energy(const GateScenario& s) {
  return fock::expectation(s.control, s.h0).real() - lowest_eigenvalue(s.h0);
}

OperatorMatrix drive_matrix(cplx f, std::size_t n) {
  OperatorMatrix h(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double s = std::sqrt(static_cast<double>(k + 1));
    h(k + 1, k) = f * s;            // f a_dag
    h(k, k + 1) = std::conj(f) * s; // conj(f) a
  }
  return h;
}

double expect_sq(const OperatorMatrix& v, const ControlState& psi) {
  const auto y = v.apply(psi.amplitudes());
  return kernels::norm_sq(y);
}

numerics::QuadOptions tight() {
  numerics::QuadOptions q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-13;
  q.max_intervals = 20000;
  return q;
}

/// V_I(t)|psi_0> for a time-independent Schroedinger V, using the
/// eigenbasis of H0: everything is carried in that basis.
class InteractionPicture {
public:
  InteractionPicture(const OperatorMatrix& h0, const OperatorMatrix& v, const ControlState& psi0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(h0));
    const Eigen::MatrixXcd& q = solver.eigenvectors();
    lambda_ = solver.eigenvalues();
    v_tilde_ = q.adjoint() * to_eigen(v) * q;
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(psi0.cutoff()));
    for (std::size_t i = 0; i < psi0.cutoff(); ++i) psi(static_cast<Eigen::Index>(i)) = psi0[i];
    psi_tilde_ = q.adjoint() * psi;
  }

  Eigen::VectorXcd u(double t) const {
    const auto n = psi_tilde_.size();
    Eigen::VectorXcd rotated(n);
    for (Eigen::Index k = 0; k < n; ++k) rotated(k) = std::polar(1.0, -lambda_(k) * t) * psi_tilde_(k);
    Eigen::VectorXcd out = v_tilde_ * rotated;
    for (Eigen::Index k = 0; k < n; ++k) out(k) *= std::polar(1.0, lambda_(k) * t);
    return out;
  }

  double mean(double t) const { return psi_tilde_.dot(u(t)).real(); }

private:
  Eigen::VectorXd lambda_;
  Eigen::MatrixXcd v_tilde_;
  Eigen::VectorXcd psi_tilde_;
};

} // namespace

double failure_from_inner(cplx inner) {
  const double p = 1.0 - 0.25 * std::norm(1.0 - inner);
  return std::clamp(p, 0.0, 1.0);
}

std::pair<double, double> switch_off_check(const GateScenario& scenario) {
  validate(scenario);
  const std::size_t n = scenario.control.cutoff();
  if (const auto* v = std::get_if<OperatorMatrix>(&scenario.v)) {
    const double start = expect_sq(*v, scenario.control);
    const auto free = fock::evolve(scenario.control, fock::constant_hamiltonian(scenario.h0), 0.0,
                                   scenario.duration, 1e-12);
    return {start, expect_sq(*v, free)};
  }
  const auto& drive = std::get<LinearDrive>(scenario.v);
  return {expect_sq(drive_matrix(drive.f(0.0), n), scenario.control),
          expect_sq(drive_matrix(drive.f(scenario.duration), n), scenario.control)};
}

GateOutcome failure_probability_exact(const GateScenario& scenario, double tol) {
  validate(scenario);
  if (!(tol > 0.0)) throw ValidationError("failure_probability_exact: tol must be positive");
  GateOutcome out;
  const std::size_t n = scenario.control.cutoff();
  const double T = scenario.duration;
  if (const auto* v = std::get_if<OperatorMatrix>(&scenario.v)) {
    const auto free = fock::evolve(scenario.control, fock::constant_hamiltonian(scenario.h0), 0.0, T,
                                   0.5 * tol);
    const auto full = fock::evolve(scenario.control,
                                   fock::constant_hamiltonian(scenario.h0 + *v), 0.0, T, 0.5 * tol);
    out.inner = fock::overlap(free, full);
    out.switch_residual_start = expect_sq(*v, scenario.control);
    out.switch_residual_end = expect_sq(*v, free);
    InteractionPicture ip(scenario.h0, *v, scenario.control);
    const double phase = numerics::integrate_real([&](double t) { return ip.mean(t); }, 0.0, T, tight());
    out.phase_residual = std::abs(phase - pi);
  } else {
    const auto& drive = std::get<LinearDrive>(scenario.v);
    auto source = [&drive, n](double t) { return drive_matrix(drive.f(t), n); };
    fock::EvolveOptions eo;
    eo.tol = tol;
    eo.breakpoints = drive.breakpoints;
    const auto final_state = fock::evolve_with_stats(scenario.control, source, 0.0, T, eo).state;
    out.inner = fock::overlap(scenario.control, final_state);
    const auto m = fock::ladder_moments(scenario.control);
    const cplx area = numerics::integrate_complex(drive.f, 0.0, T, tight(), drive.breakpoints);
    out.phase_residual = std::abs(2.0 * (area * std::conj(m.a)).real() - pi);
    out.switch_residual_start = expect_sq(drive_matrix(drive.f(0.0), n), scenario.control);
    out.switch_residual_end = expect_sq(drive_matrix(drive.f(T), n), scenario.control);
  }
  out.failure_probability = failure_from_inner(out.inner);
  out.control_energy = control_energy(scenario);
  out.calibrated = out.phase_residual < 0.1 * pi;
  return out;
}

PerturbativeEstimate failure_probability_perturbative(const GateScenario& scenario, double quad_tol) {
  validate(scenario);
  if (!(quad_tol > 0.0)) throw ValidationError("failure_probability_perturbative: quad_tol must be positive");
  const double T = scenario.duration;
  numerics::QuadOptions outer;
  outer.abs_tol = 0.5 * quad_tol;
  outer.rel_tol = 1e-11;
  outer.max_intervals = 4000;
  numerics::QuadOptions inner = outer;
  inner.abs_tol = 0.5 * quad_tol / T;

  PerturbativeEstimate est;
  double double_integral = 0.0;
  if (const auto* v = std::get_if<OperatorMatrix>(&scenario.v)) {
    InteractionPicture ip(scenario.h0, *v, scenario.control);
    auto correlation = [&](const Eigen::VectorXcd& ut, double mt, double s) {
      const Eigen::VectorXcd us = ip.u(s);
      return ut.dot(us).real() - mt * ip.mean(s);
    };
    double_integral = numerics::integrate_real(
        [&](double t) {
          const Eigen::VectorXcd ut = ip.u(t);
          const double mt = ip.mean(t);
          return numerics::integrate_real([&](double s) { return correlation(ut, mt, s); }, 0.0, T, inner);
        },
        0.0, T, outer);
    const double phase = numerics::integrate_real([&](double t) { return ip.mean(t); }, 0.0, T, tight());
    est.phase_residual = std::abs(phase - pi);
  } else {
    const auto& drive = std::get<LinearDrive>(scenario.v);
    const auto m = fock::ladder_moments(scenario.control);
    const cplx mean_a = m.a;
    const cplx mean_ad = std::conj(m.a);
    const cplx cov_adad = std::conj(m.a2) - mean_ad * mean_ad;
    const cplx cov_ada = m.n - std::norm(mean_a);
    const cplx cov_aad = m.n + 1.0 - std::norm(mean_a);
    const cplx cov_aa = m.a2 - mean_a * mean_a;
    const auto& bp = drive.breakpoints;
    double_integral = numerics::integrate_real(
        [&](double t) {
          const cplx ft = drive.f(t);
          const cplx fbt = std::conj(ft);
          return numerics::integrate_real(
              [&](double s) {
                const cplx fs = drive.f(s);
                const cplx fbs = std::conj(fs);
                const cplx c = ft * fs * cov_adad + ft * fbs * cov_ada + fbt * fs * cov_aad +
                               fbt * fbs * cov_aa;
                return c.real();
              },
              0.0, T, inner, bp);
        },
        0.0, T, outer, bp);
    const cplx area = numerics::integrate_complex(drive.f, 0.0, T, tight(), bp);
    est.phase_residual = std::abs(2.0 * (area * std::conj(m.a)).real() - pi);
  }
  est.probability = std::max(0.0, 0.5 * double_integral);
  est.advisory_only = !(est.phase_residual < 0.1 * pi);
  return est;
}

DisplacementTerms displacement_terms(const LinearDrive& drive, double duration) {
  const auto opts = tight();
  const auto& bp = drive.breakpoints;
  const cplx area = numerics::integrate_complex(drive.f, 0.0, duration, opts, bp);
  numerics::QuadOptions inner = opts;
  inner.abs_tol = 1e-14;
  const double phi = numerics::integrate_real(
      [&](double t) {
        std::vector<double> cuts;
        for (double p : bp)
          if (p < t) cuts.push_back(p);
        const cplx running = numerics::integrate_complex(drive.f, 0.0, t, inner, cuts);
        return (drive.f(t) * std::conj(running)).imag();
      },
      0.0, duration, opts, bp);
  return {cplx(0.0, -1.0) * area, phi};
}

GateOutcome displacement_oracle(cplx control_alpha, const LinearDrive& drive, double duration) {
  if (!(duration > 0.0)) throw ValidationError("displacement_oracle: duration must be positive");
  GateOutcome out;
  const auto terms = displacement_terms(drive, duration);
  const cplx beta = terms.beta;
  const double cross = 2.0 * (beta * std::conj(control_alpha)).imag();
  out.inner = std::polar(std::exp(-0.5 * std::norm(beta)), terms.magnus_phase + cross);
  out.failure_probability = failure_from_inner(out.inner);
  const cplx area = cplx(0.0, 1.0) * beta;
  out.phase_residual = std::abs(2.0 * (area * std::conj(control_alpha)).real() - pi);
  auto v_sq = [&](double t) {
    const cplx f = drive.f(t);
    return std::norm(f * std::conj(control_alpha) + std::conj(f) * control_alpha) + std::norm(f);
  };
  out.switch_residual_start = v_sq(0.0);
  out.switch_residual_end = v_sq(duration);
  // Energy in units of the mode quantum for H0 = a_dag a.
  out.control_energy = std::norm(control_alpha);
  out.calibrated = out.phase_residual < 0.1 * pi;
  return out;
}

GateScenario counterexample_scenario(int n, double g, std::size_t cutoff, double omega) {
  if (n < 1) throw ValidationError("counterexample: n must be >= 1");
  if (!(g > 0.0)) throw ValidationError("counterexample: g must be positive");
  if (cutoff < static_cast<std::size_t>(n) + 2) {
    throw ValidationError("counterexample: cutoff must be >= n + 2");
  }
  GateScenario s;
  s.control = fock::number_state(static_cast<std::size_t>(n), cutoff);
  s.h0 = omega * fock::number_operator(cutoff);
  s.v = g * fock::number_operator(cutoff);
  s.duration = pi / (g * n);
  return s;
}

GateOutcome counterexample_always_on(int n, double g, std::size_t cutoff, double omega, double tol) {
  return failure_probability_exact(counterexample_scenario(n, g, cutoff, omega), tol);
}

LinearDrive calibrate_drive(const LinearDrive& drive, cplx alpha, double duration) {
  const cplx area = numerics::integrate_complex(drive.f, 0.0, duration, tight(), drive.breakpoints);
  const double phase = 2.0 * (area * std::conj(alpha)).real();
  if (!(std::abs(phase) > 1e-300)) {
    throw DegenerateConfigurationError("calibrate_drive: drive produces no phase on this control state");
  }
  const double scale = pi / phase;
  LinearDrive out = drive;
  auto f = drive.f;
  out.f = [f, scale](double t) { return scale * f(t); };
  return out;
}

GateScenario coherent_pi_scenario(double alpha, const Envelope& envelope, std::size_t cutoff,
                                  double omega) {
  if (!(alpha > 0.0)) throw ValidationError("coherent_pi_scenario: alpha must be positive");
  const double amplitude = pi / (2.0 * alpha * envelope.area());
  const double beta = pi / (2.0 * alpha);
  const std::size_t n = cutoff > 0 ? cutoff : fock::coherent_cutoff(alpha + beta);
  GateScenario s;
  s.control = fock::coherent_state(alpha, n, cutoff > 0 ? fock::CutoffPolicy::override_rule
                                                         : fock::CutoffPolicy::enforce);
  s.h0 = omega * fock::number_operator(n);
  s.v = make_drive(envelope, amplitude);
  s.duration = envelope.duration;
  return s;
}

double coherent_alpha_for_failure(double p) {
  if (!(p > 0.0 && p < 0.75)) {
    throw ValidationError("coherent_alpha_for_failure: p must lie in (0, 0.75)");
  }
  const double beta_sq = -2.0 * std::log(2.0 * std::sqrt(1.0 - p) - 1.0);
  return pi / (2.0 * std::sqrt(beta_sq));
}

} // namespace gatebound::gate
