#include "gatebound/cli/app.hpp"

#include "gatebound/cli/run.hpp"
#include "gatebound/error.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <set>
#include <sstream>

namespace gatebound::cli {
namespace {

constexpr const char* sweep_help =
    "sweep: run a study command across values of one parameter.\n"
    "\nParameters:\n"
    "  --base (required)    study command to sweep\n"
    "  --axis (required)    parameter of the base command\n"
    "  --values (required)  comma-separated axis values\n"
    "  any other --name value is passed to every point\n"
    "\nresult.csv: sweep_<axis>_<unit>, the base command's columns, status.\n"
    "Rows are ordered by axis value; per-point seeds derive from --seed.\n";

constexpr const char* verify_help =
    "verify-all: run the acceptance suite and write verification.csv.\n"
    "\nParameters:\n"
    "  --tighten [1]  multiply every tolerance (values < 1 provoke failures)\n"
    "\nverification.csv columns: criterion name check value_natural tolerance_natural "
    "runtime_ok passed detail\n";

std::string command_list() {
  std::ostringstream out;
  out << "\nCommands:\n";
  for (const auto& c : study_commands()) out << "  " << c.name << "  " << c.summary << "\n";
  out << "  sweep  parameter sweep over a study command\n";
  out << "  verify-all  acceptance suite\n";
  out << "\nRun 'gatebound <command> --help' for parameters and CSV columns.\n";
  return out.str();
}

struct SplitArgs {
  std::vector<std::string> known;  // options handed to CLI11
  std::string command;
  std::map<std::string, std::string> params;
};

// The command is the first bare token that is not an option value. Unknown
// --key tokens are study parameters and always take a value, so the split is
// done here rather than by a positional that could swallow such a value.
SplitArgs split_args(int argc, char** argv) {
  static const std::set<std::string> with_value = {"--config", "--output", "--seed", "--units",
                                                   "--parallelism"};
  static const std::set<std::string> flags = {"-h", "--help", "--plot"};
  SplitArgs out;
  for (int i = 1; i < argc; ++i) {
    const std::string tok = argv[i];
    const std::string name = tok.substr(0, tok.find('='));
    if (flags.count(tok) || with_value.count(name)) {
      out.known.push_back(tok);
      if (with_value.count(tok) && i + 1 < argc) out.known.push_back(argv[++i]);
      continue;
    }
    if (tok.rfind("--", 0) != 0 || tok.size() < 3) {
      if (out.command.empty() && !tok.empty() && tok[0] != '-') {
        out.command = tok;
        continue;
      }
      throw ValidationError("unexpected argument '" + tok + "'");
    }
    std::string key = tok.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= argc || std::string(argv[i + 1]).rfind("--", 0) == 0) {
        throw ValidationError("--" + key + " needs a value");
      }
      value = argv[++i];
    }
    if (out.params.count(key)) throw ValidationError("--" + key + " given twice");
    out.params[key] = value;
  }
  return out;
}

} // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"gatebound: energy cost of controlled sign-flip gates"};
  app.set_help_flag();
  bool help = false;
  std::string config_path, output, units, command;
  std::uint64_t seed = 1;
  std::size_t parallelism = 1;
  bool plot = false;
  app.add_flag("-h,--help", help, "Show help");
  app.add_option("--config", config_path, "JSON run configuration; flags override it");
  app.add_option("--output", output, "Output directory [.]");
  app.add_option("--seed", seed, "Master seed [1]");
  app.add_flag("--plot", plot, "Also write plot.svg");
  app.add_option("--units", units, "natural or si [natural]");
  app.add_option("--parallelism", parallelism, "Concurrent sweep points / search workers [1]")
      ->check(CLI::PositiveNumber);
  app.usage("Usage: gatebound <command> [OPTIONS] [--name value ...]");
  app.footer(command_list());

  SplitArgs split;
  try {
    split = split_args(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  }
  command = split.command;
  try {
    // CLI11 expects the arguments in reverse order.
    std::vector<std::string> rev(split.known.rbegin(), split.known.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_validation;
  }

  if (help) {
    if (command.empty()) {
      std::cout << app.help();
    } else if (command == "sweep") {
      std::cout << sweep_help;
    } else if (command == "verify-all") {
      std::cout << verify_help;
    } else if (const auto* spec = find_command(command)) {
      std::cout << spec->name << ": " << spec->summary << "\n" << spec->help_footer();
    } else {
      std::cerr << "error: unknown command '" << command << "'\n";
      return exit_validation;
    }
    return exit_ok;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!command.empty()) cfg.command = command;
    if (!output.empty()) cfg.output_dir = output;
    if (app.count("--seed")) cfg.seed = seed;
    if (plot) cfg.plot = true;
    if (!units.empty()) cfg.units = parse_units(units);
    if (app.count("--parallelism")) cfg.parallelism = parallelism;
    for (const auto& [k, v] : split.params) cfg.params[k] = v;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  }
  if (cfg.command.empty()) {
    std::cerr << "error: no command given\n" << command_list();
    return exit_validation;
  }
  return run(cfg);
}

} // namespace gatebound::cli
