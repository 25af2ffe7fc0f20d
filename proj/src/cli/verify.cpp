#include "gatebound/cli/verify.hpp"

#include "gatebound/collision/collision.hpp"
#include "gatebound/error.hpp"
#include "gatebound/gate/engine.hpp"
#include "gatebound/heuristic/heuristic.hpp"
#include "gatebound/numerics/rng.hpp"
#include "gatebound/pulse/pulse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

namespace gatebound::cli {

bool CriterionCheck::passed() const {
  if (!std::isfinite(observed)) return false;
  return upper ? observed <= limit : observed >= limit;
}

double CriterionCheck::score() const {
  if (!std::isfinite(observed)) return std::numeric_limits<double>::infinity();
  if (upper) {
    if (limit == 0.0) return observed <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return observed / limit;
  }
  if (observed <= 0.0) return std::numeric_limits<double>::infinity();
  return limit / observed;
}

const CriterionCheck* CriterionResult::binding() const {
  const CriterionCheck* worst = nullptr;
  for (const auto& c : checks) {
    if (!worst || c.score() > worst->score()) worst = &c;
  }
  return worst;
}

namespace {

using Clock = std::chrono::steady_clock;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Suite {
  double x = 1.0; // tighten factor
  std::size_t parallelism = 4;
  std::vector<CriterionCheck> checks;

  void at_most(std::string label, double observed, double tol) {
    checks.push_back({std::move(label), observed, tol * x, true});
  }
  void at_least(std::string label, double observed, double limit) {
    checks.push_back({std::move(label), observed, limit, false});
  }
};

// 1. Always-on number coupling: the |11> branch returns with phase exactly pi.
void counterexample(Suite& s) {
  for (int n = 1; n <= 6; ++n) {
    const auto r = gate::counterexample_always_on(n, 1.0, static_cast<std::size_t>(n + 2));
    s.at_most("p(n=" + std::to_string(n) + ")", r.failure_probability, 1e-10);
  }
}

// 2. Perturbative estimate and displacement oracle against exact propagation.
void perturbative_consistency(Suite& s) {
  const double targets[] = {0.1, 0.03, 0.01};
  const double tols[] = {0.3, 0.1, 0.05};
  gate::Envelope env;
  env.duration = 10.0;
  for (int i = 0; i < 3; ++i) {
    const double alpha = gate::coherent_alpha_for_failure(targets[i]);
    const auto sc = gate::coherent_pi_scenario(alpha, env);
    const auto ex = gate::failure_probability_exact(sc, 1e-10);
    const auto pe = gate::failure_probability_perturbative(sc);
    const auto orc =
        gate::displacement_oracle(alpha, std::get<gate::LinearDrive>(sc.v), sc.duration);
    const std::string tag = "(p=" + format_number(targets[i]) + ")";
    s.at_most("p_exact_vs_target" + tag, rel(ex.failure_probability, targets[i]), 1e-6);
    s.at_most("perturbative_rel" + tag, rel(pe.probability, ex.failure_probability), tols[i]);
    s.at_most("oracle_abs" + tag, std::abs(ex.failure_probability - orc.failure_probability),
              1e-8);
  }
}

// 3. p |alpha|^2 stays flat as the control gets more classical.
void scaling_probe(Suite& s) {
  gate::Envelope env;
  env.duration = 10.0;
  const double alphas[] = {4.0, 8.0, 16.0};
  std::vector<std::future<double>> jobs;
  for (const double a : alphas) {
    jobs.push_back(std::async(s.parallelism > 1 ? std::launch::async : std::launch::deferred,
                              [a, env] {
                                const auto sc = gate::coherent_pi_scenario(a, env);
                                return gate::failure_probability_exact(sc, 1e-10)
                                           .failure_probability *
                                       a * a;
                              }));
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (auto& j : jobs) {
    const double v = j.get();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  s.at_most("max_over_min_minus_1(p alpha^2)", hi / lo - 1.0, 0.2);
}

// 4. Photon-number bound for linearly coupled pulses.
void photon_bound(Suite& s) {
  const double eps = 0.01;
  s.at_most("min_photon_number(0.01)-246.74", std::abs(pulse::min_photon_number(eps) - 246.74),
            0.01);
  std::vector<std::future<double>> jobs;
  const std::size_t workers = std::max<std::size_t>(s.parallelism, 1);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, [=] {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = w; i < 1000; i += workers) {
        const auto p = pulse::random_feasible_pulse(numerics::derive_seed(2024, i), eps, 3);
        const auto r = pulse::energy_bound_check(p, eps);
        if (!r.calibrated || r.error > eps * (1.0 + 1e-12)) {
          return -std::numeric_limits<double>::infinity();
        }
        worst = std::min(worst, r.ratio());
      }
      return worst;
    }));
  }
  double worst = std::numeric_limits<double>::infinity();
  for (auto& j : jobs) worst = std::min(worst, j.get());
  if (std::isinf(worst) && worst < 0) worst = std::nan("");
  s.at_least("min_ratio(1000 random pulses)", worst, 1.0 - 1e-6 * s.x);
  const auto eq = pulse::energy_bound_check(pulse::equality_pulse(1.0, eps, 0.0, 1.0), eps);
  s.at_most("equality_ratio-1", eq.ratio() - 1.0, 1e-4);
}

std::vector<double> report_fields(const BoundReport& r) {
  return {r.phase, r.error, r.photon_number.value_or(0.0), r.mean_omega.value_or(0.0), r.energy,
          r.bound};
}

// 5. Power-P coupling: P = 1 reproduces the linear path, P = 2 quadruples the bound.
void nonlinear(Suite& s) {
  const double eps = 0.01;
  const auto lin = pulse::random_feasible_pulse(numerics::derive_seed(7, 0), eps, 3);
  const auto lin_report = pulse::energy_bound_check(lin, eps);
  const std::size_t n = 4097;
  const auto flat =
      pulse::sample_envelope([](double) { return 1.0; }, lin.t_start, lin.t_end, n);
  std::vector<pulse::WeightedMode> modes;
  std::vector<pulse::cplx> alphas;
  for (const auto& m : lin.modes) {
    modes.push_back({m.omega, std::abs(m.g)});
    alphas.push_back(m.alpha * m.g / std::abs(m.g));
  }
  const auto red = pulse::nonlinear_reduce(1, flat, modes);
  double coeff_dev = 0.0;
  for (std::size_t k = 0; k < lin.modes.size(); ++k) {
    const auto ref = std::abs(lin.modes[k].g) *
                     pulse::mode_integral(lin.modes[k].omega, lin.t_start, lin.t_end);
    coeff_dev = std::max(coeff_dev, std::abs(red.coefficients[k] - ref) / std::abs(ref));
  }
  s.at_most("P=1 coefficient rel", coeff_dev, 1e-12);
  const auto nl_report = pulse::nonlinear_bound_check(red, alphas, eps);
  const auto a = report_fields(lin_report), b = report_fields(nl_report);
  double field_dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) field_dev = std::max(field_dev, rel(b[i], a[i]));
  s.at_most("P=1 report rel", field_dev, 1e-12);

  gate::Envelope env;
  const auto gauss = pulse::sample_envelope([&](double t) { return env(t); }, 0.0, 1.0, n);
  const pulse::WeightedMode w2[] = {{5.0, 1.0}, {9.0, 0.5}};
  auto red2 = pulse::nonlinear_reduce(2, gauss, w2);
  const auto al2 = pulse::matched_amplitudes(red2.coefficients);
  const auto r2 = pulse::nonlinear_bound_check(red2, al2, eps);
  s.at_most("P=2 bound / linear bound - 4", std::abs(r2.bound / r2.metrics.at("linear_bound") - 4.0),
            1e-12);
}

// 6. Squeezed control field.
void squeezing(Suite& s) {
  const auto o = pulse::optimize_squeezing(1e-4, 1.0);
  s.at_most("|E_min/hw - 200|", std::abs(o.e_min - 200.0), 1e-6);
  s.at_most("|r* - 2.302585|", std::abs(o.r_star - 2.302585), 1e-6);
  s.at_most("numeric vs closed-form energy rel", o.relative_disagreement, 1e-9);
}

// 7. Free collision chain.
void free_collision(Suite& s) {
  double worst = 0.0;
  for (const double n : {1.5, 2.0, 3.0, 4.0, 6.0}) {
    worst = std::max(worst, collision::powerlaw_log_derivative_check(n, 1.0).relative_difference);
  }
  s.at_most("log-derivative rel (n=1.5..6)", worst, 1e-6);
  const double m = 1e4, T = 10.0;
  s.at_most("|objective - T hbar/2m|",
            std::abs(collision::optimal_wavepacket(m, T).objective - T / (2.0 * m)), 1e-12);

  double min_margin = std::numeric_limits<double>::infinity();
  int premise = 0, calibrated = 0;
  for (const double mass : {1e3, 1e4, 1e5}) {
    for (const double v : {1.0, 2.0, 4.0}) {
      for (const double b : {0.5, 1.0, 2.0}) {
        collision::FreeCollisionConfig c;
        c.m = mass;
        c.v = v;
        c.b = b;
        c.T = T;
        c.potential = collision::PotentialLaw::power_law(2.0, 1.0);
        const double eps = 0.01;
        const auto r = collision::free_energy_bound(c, eps);
        if (!r.calibrated) continue;
        ++calibrated;
        const bool chain = r.error <= eps;
        const bool window = r.metrics.at("error_finite_window") <= eps;
        if (!chain && !window) continue;
        ++premise;
        min_margin = std::min(min_margin, r.energy / r.bound);
      }
    }
  }
  s.at_least("calibrated grid points", calibrated, 27);
  s.at_least("grid points with delta^2 <= eps", premise, 1);
  s.at_least("min m v^2 / (hbar/(eps T)) over those", min_margin, 1.0);
}

// 8. Harmonic-trap collision.
void harmonic(Suite& s) {
  collision::HarmonicCollisionConfig c;
  c.m = 1e5;
  c.b = 0.05;
  const auto d = collision::dipole_leading_ratio(c);
  s.at_most("|b R(b) extrapolated - 2.5|", std::abs(d.extrapolated - 2.5), 0.01);
  const auto e = collision::error_variance_harmonic(c);
  s.at_most("|sin-weighted| / |cos-weighted|",
            std::abs(e.integrals.sin_weighted) / std::abs(e.integrals.cos_weighted), 1e-9);
  const auto full = collision::classical_return_mismatch(c, 1.0, 1.0);
  const auto half = collision::classical_return_mismatch(c, 1.0, 0.5);
  const auto off = collision::classical_return_mismatch(c, 1.0, 0.0);
  // Nonzero means far above what the integrator produces with the coupling off.
  const double noise = std::max(std::abs(off.dp), 1e-300);
  s.at_least("|dp(C*)| / |dp(C=0)|", std::abs(full.dp) / noise, 1e3);
  s.at_least("|dx(C*)| / |dx(C=0)|", std::abs(full.dx) / std::max(std::abs(off.dx), 1e-300), 1e3);
  // Phase-space size of the mismatch. dx alone is second order in C (the
  // sin-weighted kick vanishes), dp is first order and dominates.
  const double p_scale = c.m * c.omega;
  auto size = [&](const collision::ReturnMismatch& r) { return std::hypot(r.dx, r.dp / p_scale); };
  s.at_most("|mismatch(C) / mismatch(C/2) / 2 - 1|", std::abs(size(full) / size(half) / 2.0 - 1.0), 0.05);
}

// 9. Heuristic estimate.
void heuristic_check(Suite& s) {
  heuristic::HeuristicConfig h;
  h.m = 40.0;
  h.L = 5.0;
  h.T = 2.0;
  const double closed = 2.0 * pi * pi * h.T / (h.m * h.L * h.L);
  s.at_most("misoverlap rel", rel(heuristic::misoverlap(h), closed), 1e-9);
  h.epsilon = closed; // equality case
  const auto r = heuristic::heuristic_energy_bound(h);
  s.at_most("|1/2 m v^2 / (pi^2 hbar/(eps T)) - 1|", std::abs(r.energy / r.bound - 1.0), 1e-12);

  double worst = 0.0;
  for (const double frac : {0.5, 0.75, 0.9}) {
    collision::FreeCollisionConfig c;
    c.m = 1e4;
    c.v = 2.0;
    c.T = 10.0;
    c.b = frac * c.v * c.T;
    c.potential = collision::PotentialLaw::power_law(2.0, 1.0);
    const double eps = 0.01;
    const auto fr = collision::free_energy_bound(c, eps);
    const double e_req = c.m * c.v * c.v * fr.metrics.at("error_finite_window") / eps;
    heuristic::HeuristicConfig hc;
    hc.m = c.m;
    hc.L = c.v * c.T;
    hc.T = c.T;
    hc.epsilon = eps;
    const auto hr = heuristic::heuristic_energy_bound(hc);
    worst = std::max(worst, std::abs(std::log(hr.bound / (0.5 * e_req))));
  }
  s.at_most("max |ln(heuristic / quadrature bound)|", worst, std::log(5.0));
}

// 10. Sweep determinism across parallelism.
void infrastructure(Suite& s) {
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.seed = 11;
  cfg.params = {{"base", "pulse-bound"},
                {"axis", "epsilon"},
                {"values", "0.1,0.03,0.01"},
                {"construction", "search"},
                {"budget", "400"}};
  cfg.parallelism = 1;
  const auto serial = produce(cfg);
  cfg.parallelism = std::max<std::size_t>(s.parallelism, 4);
  const auto parallel = produce(cfg);
  double mismatched = 0.0;
  for (const auto& [name, content] : serial.files) {
    const auto it = parallel.files.find(name);
    if (it == parallel.files.end() || it->second != content) mismatched += 1.0;
  }
  s.at_most("artifacts differing between parallelism 1 and 4", mismatched, 0.0);
  s.at_most("sweep exit code", serial.exit_code, 0.0);

  // Bound column against (pi^2/4) <omega> / epsilon, row by row.
  const auto report = nlohmann::json::parse(serial.files.at("report.json"));
  double worst = 0.0;
  std::size_t rows = 0;
  for (const auto& p : report.at("points")) {
    for (const auto& r : p.at("report").at("results")) {
      ++rows;
      const double expect =
          pi * pi / 4.0 * r.at("mean_omega").get<double>() / r.at("epsilon").get<double>();
      worst = std::max(worst, rel(r.at("bound").get<double>(), expect));
    }
  }
  s.at_most("| rows - 3 |", std::abs(static_cast<double>(rows) - 3.0), 0.0);
  s.at_most("bound column rel", worst, 1e-12);
}

struct Entry {
  int id;
  const char* name;
  double budget;
  void (*fn)(Suite&);
};

constexpr Entry entries[] = {
    {1, "counterexample", 1.0, counterexample},
    {2, "perturbative consistency", 30.0, perturbative_consistency},
    {3, "scaling probe", 60.0, scaling_probe},
    {4, "photon bound", 10.0, photon_bound},
    {5, "nonlinear coupling", 5.0, nonlinear},
    {6, "squeezing optimum", 1.0, squeezing},
    {7, "free collision", 10.0, free_collision},
    {8, "harmonic collision", 30.0, harmonic},
    {9, "heuristic", 1.0, heuristic_check},
    {10, "infrastructure", 180.0, infrastructure},
};

std::string detail_of(const CriterionResult& r) {
  std::string out;
  for (const auto& c : r.checks) {
    if (!out.empty()) out += "; ";
    out += c.label + "=" + format_number(c.observed) + (c.upper ? " <= " : " >= ") +
           format_number(c.limit);
  }
  if (!r.error.empty()) out += (out.empty() ? "" : "; ") + std::string("error: ") + r.error;
  return out;
}

} // namespace

std::vector<CriterionResult> verify_all(const VerifyOptions& opts) {
  std::vector<CriterionResult> out;
  const auto suite_start = Clock::now();
  for (const auto& e : entries) {
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    r.budget_seconds = e.budget;
    Suite s;
    s.x = opts.tighten;
    s.parallelism = opts.parallelism;
    const auto t0 = Clock::now();
    try {
      e.fn(s);
    } catch (const std::exception& ex) {
      r.error = ex.what();
    }
    const auto t1 = Clock::now();
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    if (e.id == 10) {
      // The infrastructure budget covers the whole suite.
      r.seconds = std::chrono::duration<double>(t1 - suite_start).count();
    }
    r.checks = std::move(s.checks);
    r.runtime_ok = r.seconds < r.budget_seconds;
    r.passed = r.error.empty() && r.runtime_ok && !r.checks.empty() &&
               std::all_of(r.checks.begin(), r.checks.end(),
                           [](const CriterionCheck& c) { return c.passed(); });
    out.push_back(std::move(r));
  }
  return out;
}

Table verification_table(const std::vector<CriterionResult>& results) {
  Table t;
  t.header = {"criterion",         "name",       "check",  "value_natural",
              "tolerance_natural", "runtime_ok", "passed", "detail"};
  for (const auto& r : results) {
    const auto* b = r.binding();
    t.rows.push_back({std::to_string(r.id), r.name, b ? b->label : "",
                      b ? format_number(b->observed) : "", b ? format_number(b->limit) : "",
                      r.runtime_ok ? "true" : "false", r.passed ? "true" : "false",
                      detail_of(r)});
  }
  return t;
}

} // namespace gatebound::cli
