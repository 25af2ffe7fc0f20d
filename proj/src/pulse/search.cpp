#include "gatebound/pulse/pulse.hpp"

#include "gatebound/error.hpp"
#include "gatebound/numerics/rng.hpp"
#include "gatebound/units.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace gatebound::pulse {
namespace {

/// Rescales alpha so the phase is pi. Returns false if the phase vanishes.
bool project_phase(PulseSpec& p) {
  const double phase = phase_accumulated(p);
  if (!(std::abs(phase) > 1e-300) || !std::isfinite(phase)) return false;
  const double s = pi / phase;
  for (auto& m : p.modes) m.alpha *= s;
  return true;
}

struct Scored {
  double objective;
  double ratio;
  bool feasible;
};

Scored score(const PulseSpec& p, double epsilon) {
  const double err = quantum_error(p);
  // energy / bound reduces to 4 epsilon N / pi^2 once <omega> cancels.
  const double ratio = 4.0 * epsilon * photon_number(p) / (pi * pi);
  const bool feasible = err <= epsilon;
  const double penalty = feasible ? 0.0 : 10.0 * (err / epsilon - 1.0);
  return {ratio + penalty, ratio, feasible};
}

struct RestartOutcome {
  PulseSpec best;
  double ratio = 0.0;
  std::size_t evaluations = 0;
};

RestartOutcome run_restart(const SearchOptions& o, std::uint64_t seed, std::size_t evals) {
  numerics::Rng rng(numerics::derive_seed(seed, 0x5EA7C4));
  RestartOutcome out;
  out.best = random_feasible_pulse(numerics::derive_seed(seed, 0), o.epsilon, o.n_modes,
                                   o.omega_min, o.omega_max, o.t_start, o.t_end);
  Scored current = score(out.best, o.epsilon);
  out.evaluations = 1;
  double sigma = 0.3;
  const double log_lo = std::log(o.omega_min), log_hi = std::log(o.omega_max);
  while (out.evaluations < evals) {
    PulseSpec trial = out.best;
    double g_scale = 0.0, a_scale = 0.0;
    for (const auto& m : trial.modes) {
      g_scale += std::norm(m.g);
      a_scale += std::norm(m.alpha);
    }
    g_scale = std::sqrt(g_scale / static_cast<double>(trial.modes.size()));
    a_scale = std::sqrt(a_scale / static_cast<double>(trial.modes.size()));
    for (auto& m : trial.modes) {
      const double lw = std::clamp(std::log(m.omega) + sigma * rng.normal(), log_lo, log_hi);
      m.omega = std::exp(lw);
      m.g += sigma * g_scale * cplx{rng.normal(), rng.normal()};
      m.alpha += sigma * a_scale * cplx{rng.normal(), rng.normal()};
    }
    ++out.evaluations;
    if (!project_phase(trial)) {
      sigma = std::max(sigma * 0.9, 1e-8);
      continue;
    }
    const Scored s = score(trial, o.epsilon);
    if (s.feasible && s.objective < current.objective) {
      out.best = std::move(trial);
      current = s;
      sigma = std::min(sigma * 1.3, 1.0);
    } else {
      sigma = std::max(sigma * 0.92, 1e-8);
    }
  }
  out.ratio = current.ratio;
  return out;
}

} // namespace

PulseSpec random_feasible_pulse(std::uint64_t seed, double epsilon, std::size_t n_modes,
                                double omega_min, double omega_max, double t_start,
                                double t_end) {
  if (n_modes == 0) throw ValidationError("random_feasible_pulse: need at least one mode");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("random_feasible_pulse: epsilon must lie in (0, 1)");
  }
  if (!(omega_min > 0.0 && omega_max >= omega_min)) {
    throw ValidationError("random_feasible_pulse: need 0 < omega_min <= omega_max");
  }
  numerics::Rng rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    PulseSpec p{{}, t_start, t_end};
    for (std::size_t k = 0; k < n_modes; ++k) {
      Mode m;
      m.omega = rng.log_uniform(omega_min, omega_max);
      m.g = cplx{rng.normal(), rng.normal()};
      m.alpha = cplx{rng.normal(), rng.normal()};
      p.modes.push_back(m);
    }
    validate(p);
    const double err = quantum_error(p);
    if (!(err > 0.0)) continue;
    const double u = 1.0 - rng.uniform(); // (0, 1]
    const double s = std::sqrt(u * epsilon / err);
    for (auto& m : p.modes) m.g *= s;
    if (!project_phase(p)) continue;
    // Rounding in the rescale can leave the error a few ulp above epsilon.
    if (quantum_error(p) > epsilon) {
      for (auto& m : p.modes) m.g *= 1.0 - 1e-15;
      project_phase(p);
    }
    return p;
  }
  throw SamplingError("random_feasible_pulse: no non-degenerate pulse in 64 draws");
}

SearchResult adversarial_pulse_search(const SearchOptions& o) {
  if (o.budget < 1) throw ValidationError("adversarial_pulse_search: budget must be >= 1");
  const std::size_t per = o.descent_steps + 1;
  const std::size_t restarts = (o.budget + per - 1) / per;
  std::vector<RestartOutcome> outcomes(restarts);
  auto evals_for = [&](std::size_t i) { return std::min(per, o.budget - i * per); };
  const std::size_t workers = std::max<std::size_t>(1, o.parallelism);
  for (std::size_t start = 0; start < restarts; start += workers) {
    const std::size_t stop = std::min(restarts, start + workers);
    if (workers == 1) {
      outcomes[start] = run_restart(o, numerics::derive_seed(o.seed, start), evals_for(start));
      continue;
    }
    std::vector<std::future<RestartOutcome>> jobs;
    for (std::size_t i = start; i < stop; ++i) {
      jobs.push_back(std::async(std::launch::async, run_restart, std::cref(o),
                                numerics::derive_seed(o.seed, i), evals_for(i)));
    }
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = jobs[i - start].get();
  }

  SearchResult result;
  result.restarts = restarts;
  std::size_t best = 0;
  for (std::size_t i = 0; i < restarts; ++i) {
    result.evaluations += outcomes[i].evaluations;
    result.restart_ratios.push_back(outcomes[i].ratio);
    if (outcomes[i].ratio < outcomes[best].ratio) best = i;
  }
  result.best = energy_bound_check(outcomes[best].best, o.epsilon);
  result.best_ratio = result.best.ratio();
  result.best.metrics["restarts"] = static_cast<double>(restarts);
  result.best.metrics["evaluations"] = static_cast<double>(result.evaluations);
  return result;
}

} // namespace gatebound::pulse
