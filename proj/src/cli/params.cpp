#include "gatebound/cli/params.hpp"

#include "gatebound/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace gatebound::cli {
namespace {

using K = ParamKind;

ColumnSpec dimless(std::string name) { return {std::move(name), "dimensionless", "dimensionless"}; }
ColumnSpec energy(std::string name) { return {std::move(name), "hbar_rad_per_s", "J"}; }
ColumnSpec frequency(std::string name) { return {std::move(name), "rad_per_s", "rad_per_s"}; }
ColumnSpec seconds(std::string name) { return {std::move(name), "s", "s"}; }
ColumnSpec radians(std::string name) { return {std::move(name), "rad", "rad"}; }
ColumnSpec length(std::string name) { return {std::move(name), "nat", "m"}; }
ColumnSpec momentum(std::string name) { return {std::move(name), "nat", "kg_m_per_s"}; }
ColumnSpec coupling(std::string name) { return {std::move(name), "nat", "J_m_pow_n"}; }
ColumnSpec flag(std::string name) { return {std::move(name), "bool", "bool"}; }
ColumnSpec count(std::string name) { return {std::move(name), "count", "count"}; }

std::vector<CommandSpec> build() {
  std::vector<CommandSpec> out;
  out.push_back(
      {"counterexample",
       "Always-on number-state control: H0 = omega a^dag a, V = g a^dag a, T = pi/(g n).",
       {{"n", K::int_list, false, "1..6", "photon numbers (list or range a..b)"},
        {"g", K::real, false, "1.0", "coupling g (rad/s)"},
        {"omega", K::real, false, "1.0", "oscillator frequency (rad/s)"},
        {"cutoff_extra", K::integer, false, "2", "basis size is n + 1 + cutoff_extra"},
        {"tol", K::real, false, "1e-12", "propagator tolerance"}},
       {count("n"), frequency("g"), seconds("T"), count("cutoff"), dimless("inner_re"),
        dimless("inner_im"), dimless("p_exact")}});
  out.push_back(
      {"gate-sim",
       "Coherent control |alpha> driven by a real pi-calibrated envelope; exact, perturbative "
       "and closed-form failure probabilities.",
       {{"alpha", K::real_list, true, "", "coherent amplitudes (real)"},
        {"envelope", K::text, false, "gaussian", "gaussian | raised_cosine | trapezoid"},
        {"duration", K::real, false, "10.0", "gate time T (s)"},
        {"omega", K::real, false, "1.0", "control frequency (rad/s)"},
        {"cutoff", K::integer, false, "0", "Fock cutoff; 0 applies the tail rule"},
        {"tol", K::real, false, "1e-10", "propagator tolerance"},
        {"perturbative", K::integer, false, "1", "also evaluate the perturbative estimate"}},
       {dimless("alpha"), count("cutoff"), dimless("p_exact"), dimless("p_perturbative"),
        dimless("p_oracle"), dimless("p_alpha_sq"), radians("phase_residual"),
        dimless("switch_start"), dimless("switch_end"), energy("control_energy")}});
  out.push_back(
      {"pulse-bound",
       "Multimode coherent pulse against E >= (pi^2/4) hbar <omega> / epsilon.",
       {{"epsilon", K::real_list, true, "", "error budgets in (0, 1)"},
        {"construction", K::text, false, "equality", "equality | random | search"},
        {"omega", K::real, false, "1.0", "mode frequency for the equality construction"},
        {"duration", K::real, false, "1.0", "window [0, T] (s)"},
        {"n_modes", K::integer, false, "3", "modes for random/search"},
        {"budget", K::integer, false, "1000", "pulses evaluated by search"}},
       {dimless("epsilon"), radians("phase"), dimless("error"), count("photon_number"),
        frequency("mean_omega"), energy("energy"), energy("bound"), dimless("ratio"),
        flag("satisfied"), flag("premise_met"), flag("calibrated"),
        count("min_photon_number")}});
  out.push_back(
      {"squeeze-opt",
       "Squeezed-field trade-off hbar omega (1/(e^{2r} eps) + e^{2r}) and its optimum.",
       {{"epsilon", K::real_list, true, "", "error budgets in (0, 1]"},
        {"omega", K::real, false, "1.0", "carrier frequency (rad/s)"},
        {"duration", K::real, false, "1.0", "pulse duration for the linewidth bound (s)"}},
       {dimless("epsilon"), dimless("r_star"), dimless("r_numeric"), dimless("e_min_over_hw"),
        energy("e_min"), energy("e_numeric"), dimless("relative_disagreement"),
        frequency("omega_min"), energy("linewidth_bound_derived"),
        energy("linewidth_bound_quoted")}});
  out.push_back(
      {"nonlinear-bound",
       "Field coupled through E^P: effective linear coefficients and the P^2 bound.",
       {{"P", K::int_list, false, "1,2", "powers of the field"},
        {"epsilon", K::real, true, "", "error budget"},
        {"omega", K::real_list, false, "5.0", "mode frequencies (rad/s)"},
        {"weight", K::real, false, "1.0", "mode weight before scaling"},
        {"envelope", K::text, false, "gaussian", "gaussian | raised_cosine | trapezoid"},
        {"duration", K::real, false, "1.0", "window [0, T] (s)"},
        {"samples", K::integer, false, "4097", "envelope samples (rounded to 1 mod 4)"},
        {"fill", K::real, false, "0.5", "weights scaled so error = fill * epsilon"}},
       {count("P"), dimless("epsilon"), radians("phase"), dimless("error"),
        count("photon_number"), frequency("mean_omega"), energy("energy"), energy("bound"),
        energy("linear_bound"), dimless("ratio"), flag("satisfied"), flag("premise_met")}});
  out.push_back(
      {"collision-free",
       "Straight-line collision with a power-law potential: calibrated coupling, optimal "
       "wavepacket and m v^2 >= hbar/(epsilon T).",
       {{"m", K::real, false, "1e4", "particle mass"},
        {"v", K::real, false, "2.0", "CM-frame speed of each particle"},
        {"b", K::real, false, "1.0", "distance of closest approach"},
        {"T", K::real, false, "10.0", "interaction window (s)"},
        {"n", K::real, false, "2.0", "power-law exponent, > 1"},
        {"epsilon", K::real_list, true, "", "error budgets"}},
       {dimless("epsilon"), coupling("coupling"), radians("phase"), dimless("delta_sq"),
        dimless("delta_sq_finite_window"), energy("energy"), energy("bound"), dimless("ratio"),
        flag("satisfied"), flag("premise_met"), energy("required_energy")}});
  out.push_back(
      {"collision-harmonic",
       "Particles swinging toward each other in harmonic traps: leading-order error and "
       "m omega^2 A^2 >= hbar/(epsilon T).",
       {{"m", K::real, false, "1e5", "particle mass"},
        {"omega", K::real, false, "1.0", "trap frequency (rad/s)"},
        {"A", K::real, false, "1.0", "oscillation amplitude"},
        {"b", K::real, false, "0.05", "closest distance"},
        {"n", K::real, false, "3.0", "power-law exponent"},
        {"squeeze_r", K::real, false, "0.0", "position squeezing of each wavepacket"},
        {"epsilon", K::real_list, true, "", "error budgets"}},
       {dimless("epsilon"), coupling("coupling"), dimless("delta_sq"), dimless("b_R"),
        dimless("dipole_limit"), dimless("sin_over_cos"), energy("energy"), energy("bound"),
        dimless("ratio"), flag("satisfied"), flag("premise_met")}});
  out.push_back(
      {"return-mismatch",
       "Classical two-particle trajectories over one trap period: return mismatch and the "
       "squeezing self-consistency probe.",
       {{"m", K::real, false, "1e5", "particle mass"},
        {"omega", K::real, false, "1.0", "trap frequency (rad/s)"},
        {"A", K::real, false, "1.0", "oscillation amplitude"},
        {"b", K::real, false, "0.05", "closest distance"},
        {"n", K::real, false, "3.0", "power-law exponent"},
        {"coupling_scale", K::real_list, false, "1.0,0.5", "multiples of the calibrated C"},
        {"squeeze_r", K::real, false, "0.0", "position squeezing for the probe"},
        {"epsilon", K::real, false, "1e-4", "error budget for the probe"},
        {"tol", K::real, false, "1e-10", "ODE tolerance"}},
       {dimless("coupling_scale"), coupling("coupling"), length("dx_return"),
        momentum("dp_return"), dimless("energy_drift"), count("steps"), dimless("leading"),
        dimless("proxy"), dimless("proxy_ratio"), flag("flagged")}});
  out.push_back(
      {"heuristic",
       "Force-displacement estimate: mis-overlap budget and m v^2 / 2 >= pi^2 hbar/(eps T).",
       {{"m", K::real, false, "1.0", "particle mass"},
        {"L", K::real, false, "1.0", "characteristic length"},
        {"T", K::real, false, "1.0", "interaction time (s)"},
        {"epsilon", K::real_list, true, "", "error budgets"},
        {"dx", K::real, false, "", "explicit position width (with dp)"},
        {"dp", K::real, false, "", "explicit momentum width (with dx)"}},
       {dimless("epsilon"), length("delta_x"), momentum("delta_p"), dimless("misoverlap"),
        energy("energy"), energy("bound"), energy("bound_printed"), dimless("ratio"),
        flag("satisfied")}});
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError("not a finite number: '" + raw + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& raw) {
  const std::string s = trim(raw);
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("not an integer: '" + raw + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

} // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ColumnSpec::header(UnitSystem units) const {
  const std::string& unit = units == UnitSystem::si ? si_unit : natural_unit;
  return unit.empty() ? name : name + "_" + unit;
}

const ParamSpec* CommandSpec::find(const std::string& param) const {
  for (const auto& p : params) {
    if (p.name == param) return &p;
  }
  return nullptr;
}

std::vector<std::string> CommandSpec::headers(UnitSystem units) const {
  std::vector<std::string> h;
  for (const auto& c : columns) h.push_back(c.header(units));
  return h;
}

std::string CommandSpec::help_footer() const {
  std::ostringstream out;
  out << "\nParameters (pass as --name value):\n";
  for (const auto& p : params) {
    out << "  --" << p.name;
    if (p.required) {
      out << " (required)";
    } else if (!p.default_value.empty()) {
      out << " [" << p.default_value << "]";
    }
    out << "  " << p.help << "\n";
  }
  out << "\nresult.csv columns (natural units):\n ";
  for (const auto& c : columns) out << " " << c.header(UnitSystem::natural);
  out << "\n";
  return out.str();
}

const std::vector<CommandSpec>& study_commands() {
  static const std::vector<CommandSpec> commands = build();
  return commands;
}

const CommandSpec* find_command(const std::string& name) {
  for (const auto& c : study_commands()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_real(part));
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(part));
      continue;
    }
    const auto lo = parse_int(part.substr(0, dots));
    const auto hi = parse_int(part.substr(dots + 2));
    if (hi < lo || hi - lo > 100000) throw ValidationError("bad range: '" + part + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

double Params::real(const std::string& name) const { return reals_.at(name); }
std::int64_t Params::integer(const std::string& name) const { return ints_.at(name); }
const std::vector<double>& Params::reals(const std::string& name) const {
  return real_lists_.at(name);
}
const std::vector<std::int64_t>& Params::integers(const std::string& name) const {
  return int_lists_.at(name);
}
const std::string& Params::text(const std::string& name) const { return texts_.at(name); }
bool Params::has(const std::string& name) const { return resolved_.count(name) > 0; }

Params Params::parse(const CommandSpec& spec, const std::map<std::string, std::string>& raw) {
  for (const auto& [key, value] : raw) {
    if (!spec.find(key)) {
      throw ValidationError("unknown parameter --" + key + " for " + spec.name);
    }
  }
  Params p;
  for (const auto& ps : spec.params) {
    const auto it = raw.find(ps.name);
    std::string value;
    if (it != raw.end()) {
      value = it->second;
    } else if (ps.required) {
      throw ValidationError("missing required parameter --" + ps.name + " for " + spec.name);
    } else if (ps.default_value.empty()) {
      continue;
    } else {
      value = ps.default_value;
    }
    try {
      switch (ps.kind) {
        case ParamKind::real:
          p.reals_[ps.name] = parse_real(value);
          p.resolved_[ps.name] = format_number(p.reals_[ps.name]);
          break;
        case ParamKind::integer:
          p.ints_[ps.name] = parse_int(value);
          p.resolved_[ps.name] = std::to_string(p.ints_[ps.name]);
          break;
        case ParamKind::real_list:
          p.real_lists_[ps.name] = parse_real_list(value);
          p.resolved_[ps.name] = join(p.real_lists_[ps.name]);
          break;
        case ParamKind::int_list:
          p.int_lists_[ps.name] = parse_int_list(value);
          p.resolved_[ps.name] = join(p.int_lists_[ps.name]);
          break;
        case ParamKind::text:
          p.texts_[ps.name] = trim(value);
          p.resolved_[ps.name] = p.texts_[ps.name];
          break;
      }
    } catch (const ValidationError& e) {
      throw ValidationError("--" + ps.name + ": " + e.what());
    }
  }
  return p;
}

} // namespace gatebound::cli
