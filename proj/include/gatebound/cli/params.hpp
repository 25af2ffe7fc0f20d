#pragma once

// Per-command parameter schemas. Raw values arrive as strings (from flags or
// a JSON config) and are checked against the schema before any computation.

#include "gatebound/units.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gatebound::cli {

enum class ParamKind {
  real,       // 1.5
  integer,    // 3
  real_list,  // 0.1,0.03,0.01
  int_list,   // 1,2,3 or 1..6
  text,       // gaussian
};

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::real;
  bool required = false;
  std::string default_value; // ignored when required
  std::string help;
};

/// One CSV column: base name plus the unit suffix for each unit system.
struct ColumnSpec {
  std::string name;
  std::string natural_unit;
  std::string si_unit;

  std::string header(UnitSystem units) const;
};

struct CommandSpec {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  std::vector<ColumnSpec> columns;

  const ParamSpec* find(const std::string& param) const;
  std::vector<std::string> headers(UnitSystem units) const;
  /// Text appended to --help: parameters and CSV columns.
  std::string help_footer() const;
};

/// Schemas for every study command (sweep and verify-all excluded).
const std::vector<CommandSpec>& study_commands();
const CommandSpec* find_command(const std::string& name);

/// Parsed, schema-checked parameter values.
class Params {
public:
  double real(const std::string& name) const;
  std::int64_t integer(const std::string& name) const;
  const std::vector<double>& reals(const std::string& name) const;
  const std::vector<std::int64_t>& integers(const std::string& name) const;
  const std::string& text(const std::string& name) const;
  bool has(const std::string& name) const;

  /// Canonical string form of every resolved value, for report.json.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

  /// Throws ValidationError on unknown keys, missing required keys and
  /// malformed values.
  static Params parse(const CommandSpec& spec, const std::map<std::string, std::string>& raw);

private:
  std::map<std::string, double> reals_;
  std::map<std::string, std::int64_t> ints_;
  std::map<std::string, std::vector<double>> real_lists_;
  std::map<std::string, std::vector<std::int64_t>> int_lists_;
  std::map<std::string, std::string> texts_;
  std::map<std::string, std::string> resolved_;
};

/// Shortest round-trip decimal form; used for every number in CSV output.
std::string format_number(double v);

std::vector<double> parse_real_list(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);

} // namespace gatebound::cli
