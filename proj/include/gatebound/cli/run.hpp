#pragma once

#include "gatebound/cli/params.hpp"
#include "gatebound/units.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gatebound::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 1;
  UnitSystem units = UnitSystem::natural;
  bool plot = false;
  std::size_t parallelism = 1;
};

/// Reads {command, params, seed, output_dir, units, plot, parallelism} from a
/// JSON file. Scalars and arrays in params become their string forms.
RunConfig load_config(const std::filesystem::path& path);
UnitSystem parse_units(const std::string& name);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
  std::vector<PlotSeries> series;
};

struct CommandOutput {
  Table table;
  nlohmann::json report;
  std::optional<PlotSpec> plot;
  /// Rows whose computation failed (sweep); any entry makes the exit code 3.
  std::size_t failed_rows = 0;
};

/// Runs one study command with already-validated parameters. Throws the
/// library's errors on failure.
CommandOutput execute(const CommandSpec& spec, const Params& params, const RunConfig& cfg);

/// Validates, executes and writes result.csv, report.json and (with --plot)
/// plot.svg. Nothing is written on failure. Returns the exit code; diagnostics
/// go to stderr.
int run(const RunConfig& cfg);

/// What run() would write, keyed by file name, plus the exit code. Throws on
/// whole-run failures; a sweep with failed points returns exit_numerical
/// together with its artifacts.
struct Artifacts {
  std::map<std::string, std::string> files;
  int exit_code = exit_ok;
};
Artifacts produce(const RunConfig& cfg);

/// Runs the base command at each axis value (params "base", "axis", "values").
Artifacts run_sweep(const RunConfig& cfg);

/// RFC 4180 CSV text.
std::string to_csv(const Table& table);
std::string render_svg(const PlotSpec& plot);
/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace gatebound::cli
