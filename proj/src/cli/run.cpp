#include "gatebound/cli/run.hpp"

#include "gatebound/cli/verify.hpp"
#include "gatebound/error.hpp"
#include "gatebound/numerics/rng.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <iostream>
#include <numeric>
#include <optional>

namespace gatebound::cli {
namespace {

using nlohmann::json;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    auto item = text.substr(start, end - start);
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    item = a == std::string::npos ? "" : item.substr(a, b - a + 1);
    if (item.empty()) throw ValidationError("sweep: empty entry in --values");
    out.push_back(item);
    start = end + 1;
  }
  return out;
}

std::optional<double> as_number(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Unit suffix for a swept parameter that has no same-named output column.
std::string param_unit(const std::string& name, UnitSystem units) {
  const bool si = units == UnitSystem::si;
  if (name == "m") return si ? "kg" : "nat";
  if (name == "v") return si ? "m_per_s" : "nat";
  if (name == "b" || name == "A" || name == "L" || name == "dx") return si ? "m" : "nat";
  if (name == "dp") return si ? "kg_m_per_s" : "nat";
  if (name == "T" || name == "duration") return "s";
  if (name == "omega" || name == "g") return "rad_per_s";
  return "dimensionless";
}

std::string axis_header(const CommandSpec& spec, const std::string& axis, UnitSystem units) {
  for (const auto& c : spec.columns) {
    if (c.name == axis) return "sweep_" + c.header(units);
  }
  return "sweep_" + axis + "_" + param_unit(axis, units);
}

Artifacts study(const CommandSpec& spec, const RunConfig& cfg) {
  const auto params = Params::parse(spec, cfg.params);
  auto out = execute(spec, params, cfg);
  Artifacts a;
  a.files["result.csv"] = to_csv(out.table);
  a.files["report.json"] = dump(out.report);
  if (cfg.plot && out.plot) a.files["plot.svg"] = render_svg(*out.plot);
  return a;
}

Artifacts verify_command(const RunConfig& cfg) {
  VerifyOptions opts;
  opts.parallelism = std::max<std::size_t>(cfg.parallelism, 1);
  for (const auto& [k, v] : cfg.params) {
    if (k != "tighten") throw ValidationError("verify-all: unknown parameter --" + k);
    const auto t = as_number(v);
    if (!t || !(*t > 0.0)) throw ValidationError("verify-all: --tighten must be a positive number");
    opts.tighten = *t;
  }
  const auto results = verify_all(opts);
  Artifacts a;
  a.files["verification.csv"] = to_csv(verification_table(results));
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    std::cerr << "criterion " << r.id << " (" << r.name << "): " << (r.passed ? "pass" : "FAIL")
              << ", " << format_number(r.seconds) << " s\n";
  }
  a.exit_code = ok ? exit_ok : exit_numerical;
  return a;
}

} // namespace

Artifacts run_sweep(const RunConfig& cfg) {
  auto raw = cfg.params;
  auto take = [&](const std::string& key) {
    const auto it = raw.find(key);
    if (it == raw.end()) throw ValidationError("sweep: missing --" + key);
    auto v = it->second;
    raw.erase(it);
    return v;
  };
  const auto base_name = take("base");
  const auto axis = take("axis");
  const auto value_text = take("values");
  const CommandSpec* spec = find_command(base_name);
  if (!spec) throw ValidationError("sweep: unknown base command '" + base_name + "'");
  if (!spec->find(axis)) {
    throw ValidationError("sweep: '" + axis + "' is not a parameter of " + base_name);
  }
  auto values = split_values(value_text);

  // Order by axis value: numerically when every value is a number.
  std::vector<std::optional<double>> numeric;
  for (const auto& v : values) numeric.push_back(as_number(v));
  const bool all_numeric =
      std::all_of(numeric.begin(), numeric.end(), [](const auto& n) { return n.has_value(); });
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return all_numeric ? *numeric[a] < *numeric[b] : values[a] < values[b];
  });
  std::vector<std::string> sorted;
  for (const auto i : order) sorted.push_back(all_numeric ? format_number(*numeric[i]) : values[i]);

  // Validate every point before computing any.
  std::vector<Params> points;
  for (const auto& v : sorted) {
    auto p = raw;
    p[axis] = v;
    points.push_back(Params::parse(*spec, p));
  }

  struct PointResult {
    std::optional<CommandOutput> out;
    std::string status = "ok";
    std::string error;
  };
  auto run_point = [&](std::size_t i) {
    PointResult r;
    RunConfig pc = cfg;
    pc.seed = numerics::derive_seed(cfg.seed, i);
    pc.parallelism = 1;
    try {
      r.out = execute(*spec, points[i], pc);
    } catch (const ValidationError& e) {
      r.status = "validation_error";
      r.error = e.what();
    } catch (const std::exception& e) {
      r.status = "numerical_error";
      r.error = e.what();
    }
    return r;
  };

  std::vector<PointResult> results(points.size());
  const std::size_t width = std::max<std::size_t>(cfg.parallelism, 1);
  for (std::size_t start = 0; start < points.size(); start += width) {
    const std::size_t stop = std::min(points.size(), start + width);
    if (width == 1) {
      results[start] = run_point(start);
      continue;
    }
    std::vector<std::future<PointResult>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, run_point, i));
    }
    for (std::size_t i = start; i < stop; ++i) results[i] = batch[i - start].get();
  }

  Table table;
  table.header.push_back(axis_header(*spec, axis, cfg.units));
  for (const auto& h : spec->headers(cfg.units)) table.header.push_back(h);
  table.header.push_back("status");
  json report;
  report["command"] = "sweep";
  report["base"] = base_name;
  report["axis"] = axis;
  report["values"] = sorted;
  report["seed"] = cfg.seed;
  report["units"] = std::string(to_string(cfg.units));
  report["hbar"] = hbar_of(cfg.units);
  report["points"] = json::array();
  std::size_t failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto& r = results[i];
    json pj{{"value", sorted[i]},
            {"seed", numerics::derive_seed(cfg.seed, i)},
            {"status", r.status}};
    if (r.out) {
      for (auto row : r.out->table.rows) {
        row.insert(row.begin(), sorted[i]);
        row.push_back(r.status);
        table.rows.push_back(std::move(row));
      }
      pj["report"] = r.out->report;
    } else {
      ++failed;
      std::vector<std::string> row(table.header.size());
      row.front() = sorted[i];
      row.back() = r.status;
      table.rows.push_back(std::move(row));
      pj["error"] = r.error;
      std::cerr << "sweep point " << axis << "=" << sorted[i] << ": " << r.error << "\n";
    }
    report["points"].push_back(pj);
  }
  report["failed_points"] = failed;

  Artifacts a;
  a.files["result.csv"] = to_csv(table);
  a.files["report.json"] = dump(report);
  a.exit_code = failed ? exit_numerical : exit_ok;
  return a;
}

Artifacts produce(const RunConfig& cfg) {
  if (cfg.command == "sweep") return run_sweep(cfg);
  if (cfg.command == "verify-all") return verify_command(cfg);
  const CommandSpec* spec = find_command(cfg.command);
  if (!spec) {
    throw ValidationError(cfg.command.empty() ? "no command given"
                                              : "unknown command '" + cfg.command + "'");
  }
  return study(*spec, cfg);
}

int run(const RunConfig& cfg) {
  Artifacts a;
  try {
    a = produce(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
  try {
    std::filesystem::create_directories(cfg.output_dir);
    for (const auto& [name, content] : a.files) write_atomic(cfg.output_dir / name, content);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
  return a.exit_code;
}

} // namespace gatebound::cli
