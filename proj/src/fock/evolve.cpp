#include "gatebound/fock/evolve.hpp"

#include "gatebound/error.hpp"
#include "gatebound/kernels/complex_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gatebound::fock {

HamiltonianSource constant_hamiltonian(OperatorMatrix h) {
  return [h = std::move(h)](double) { return h; };
}

std::vector<cplx> expm_action(
    const std::function<void(std::span<const cplx>, std::span<cplx>)>& apply_k,
    double norm_bound, std::span<const cplx> psi) {
  const std::size_t n = psi.size();
  std::vector<cplx> result(psi.begin(), psi.end());
  if (norm_bound == 0.0) return result;
  const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(norm_bound / 1.5)));
  const double scale = 1.0 / static_cast<double>(substeps);
  std::vector<cplx> term(n), next(n);
  const double psi_norm = std::sqrt(kernels::norm_sq(psi));
  for (std::size_t s = 0; s < substeps; ++s) {
    std::copy(result.begin(), result.end(), term.begin());
    for (int k = 1; k < 80; ++k) {
      apply_k(term, next);
      // term_k = (-i K scale / k) term_{k-1}
      const double factor = scale / k;
      for (std::size_t i = 0; i < n; ++i) term[i] = {factor * next[i].imag(), -factor * next[i].real()};
      kernels::axpy(1.0, term, result);
      if (std::sqrt(kernels::norm_sq(term)) <= 1e-17 * psi_norm) break;
    }
  }
  return result;
}

namespace {

std::vector<cplx> step(const HamiltonianSource& hamiltonian, StepScheme scheme,
                       std::span<const cplx> psi, double t, double h) {
  const std::size_t n = psi.size();
  if (scheme == StepScheme::midpoint) {
    const OperatorMatrix hm = hamiltonian(t + 0.5 * h);
    if (hm.cutoff() != n) throw DimensionError("evolve: Hamiltonian cutoff mismatch");
    auto apply = [&](std::span<const cplx> x, std::span<cplx> y) {
      hm.apply(x, y);
      for (auto& v : y) v = {v.real() * h, v.imag() * h};
    };
    return expm_action(apply, h * hm.norm_inf(), psi);
  }
  // Commutator-free fourth-order Magnus (two exponentials of linear
  // combinations of H at the Gauss-Legendre nodes).
  const double offset = std::sqrt(3.0) / 6.0;
  const OperatorMatrix h1 = hamiltonian(t + (0.5 - offset) * h);
  const OperatorMatrix h2 = hamiltonian(t + (0.5 + offset) * h);
  if (h1.cutoff() != n || h2.cutoff() != n) {
    throw DimensionError("evolve: Hamiltonian cutoff mismatch");
  }
  const double w1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
  const double w2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
  const double n1 = h1.norm_inf(), n2 = h2.norm_inf();
  auto exp_combo = [&](double c1, double c2, std::span<const cplx> x) {
    const OperatorMatrix k = OperatorMatrix::combine(c1 * h, h1, c2 * h, h2);
    auto apply = [&k](std::span<const cplx> in, std::span<cplx> out) { k.apply(in, out); };
    return expm_action(apply, std::abs(h) * (std::abs(c1) * n1 + std::abs(c2) * n2), x);
  };
  // Rightmost factor acts first.
  const auto first = exp_combo(w2, w1, psi);
  return exp_combo(w1, w2, first);
}

} // namespace

Propagation evolve_with_stats(const ControlState& state, const HamiltonianSource& hamiltonian,
                              double t0, double t1, const EvolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw ValidationError("evolve: tol must be positive");
  if (t1 < t0) throw ValidationError("evolve: t1 must be >= t0");
  Propagation out;
  const double span = t1 - t0;
  std::vector<cplx> psi(state.amplitudes().begin(), state.amplitudes().end());
  if (span == 0.0) {
    out.state = ControlState(std::move(psi), state.unit_system());
    return out;
  }
  const double order = opts.scheme == StepScheme::midpoint ? 2.0 : 4.0;
  double h = opts.initial_step > 0.0 ? opts.initial_step : span / 8.0;
  const double h_min = opts.min_step > 0.0 ? opts.min_step : 1e-12 * span;
  // Local errors below this are rounding noise and cannot be reduced further.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon();
  std::vector<double> stops;
  for (const double b : opts.breakpoints) {
    if (b > t0 && b < t1) stops.push_back(b);
  }
  std::sort(stops.begin(), stops.end());
  stops.push_back(t1);
  auto next_stop = stops.begin();
  double t = t0;
  while (t < t1) {
    if (out.accepted + out.rejected >= opts.max_steps) {
      std::ostringstream msg;
      msg << "evolve: exceeded " << opts.max_steps << " steps at t=" << t << " (h=" << h << ")";
      throw IntegrationFailure(msg.str());
    }
    while (*next_stop <= t) ++next_stop;
    const double stop = *next_stop;
    const bool last = t + h >= stop;
    const double h_free = h;
    if (last) h = stop - t;
    const auto big = step(hamiltonian, opts.scheme, psi, t, h);
    const auto mid = step(hamiltonian, opts.scheme, psi, t, 0.5 * h);
    auto fine = step(hamiltonian, opts.scheme, mid, t + 0.5 * h, 0.5 * h);
    double err_sq = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) err_sq += std::norm(big[i] - fine[i]);
    const double err = std::sqrt(err_sq);
    const double allowed = std::max(opts.tol * h / span, floor);
    if (err <= allowed) {
      psi.swap(fine);
      t = last ? stop : t + h;
      ++out.accepted;
      out.max_error_estimate = std::max(out.max_error_estimate, err);
      const double grow = err == 0.0 ? 4.0 : std::min(4.0, 0.9 * std::pow(allowed / err, 1.0 / (order + 1.0)));
      h *= std::max(1.0, grow);
      // A step clipped at a breakpoint says nothing about the natural size.
      if (last) h = std::max(h, h_free);
    } else {
      ++out.rejected;
      h *= std::max(0.1, 0.9 * std::pow(allowed / err, 1.0 / (order + 1.0)));
      if (h < h_min) {
        std::ostringstream msg;
        msg << "evolve: step size underflow at t=" << t << " (h=" << h << ", error estimate " << err
            << " vs allowed " << allowed << ")";
        throw IntegrationFailure(msg.str());
      }
    }
  }
  out.state = ControlState(std::move(psi), state.unit_system());
  return out;
}

ControlState evolve(const ControlState& state, const HamiltonianSource& hamiltonian, double t0,
                    double t1, double tol) {
  EvolveOptions opts;
  opts.tol = tol;
  return evolve_with_stats(state, hamiltonian, t0, t1, opts).state;
}

} // namespace gatebound::fock
