// The command-line layer, from parameter parsing to the executable's exit codes.

#include "gatebound/cli/params.hpp"
#include "gatebound/cli/run.hpp"
#include "gatebound/error.hpp"
#include "gatebound/numerics/rng.hpp"

#include "doctest.h"

#include <sys/wait.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace gatebound;
using namespace gatebound::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  auto p = fs::temp_directory_path() /
           ("gatebound_test_" + std::to_string(::getpid()) + "_" + tag + "_" + std::to_string(counter++));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(cell);
      cell.clear();
    } else if (c == '\r') {
    } else if (c == '\n') {
      row.push_back(cell);
      rows.push_back(row);
      row.clear();
      cell.clear();
    } else {
      cell += c;
    }
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& prefix) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i].rfind(prefix, 0) == 0) return static_cast<int>(i);
  return -1;
}

int shell(const std::string& args) {
  const std::string cmd = std::string(GATEBOUND_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig config(const std::string& command, std::map<std::string, std::string> params,
                 const fs::path& out) {
  RunConfig c;
  c.command = command;
  c.params = std::move(params);
  c.output_dir = out;
  return c;
}

} // namespace

TEST_CASE("params: defaults, lists, ranges and errors") {
  const auto* spec = find_command("counterexample");
  REQUIRE(spec);
  const auto p = Params::parse(*spec, {{"n", "1..4"}});
  CHECK(p.integers("n") == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(p.real("g") == 1.0);
  CHECK(p.resolved().at("n") == "1,2,3,4");
  CHECK_THROWS_AS(Params::parse(*spec, {{"bogus", "1"}}), ValidationError);
  CHECK_THROWS_AS(Params::parse(*spec, {{"g", "abc"}}), ValidationError);
  CHECK_THROWS_AS(Params::parse(*spec, {{"n", "3..1"}}), ValidationError);
  const auto* pb = find_command("pulse-bound");
  CHECK_THROWS_AS(Params::parse(*pb, {}), ValidationError);
  CHECK(Params::parse(*pb, {{"epsilon", "0.1, 0.01"}}).reals("epsilon") == std::vector<double>{0.1, 0.01});
  CHECK(parse_int_list("2,5..7") == std::vector<std::int64_t>{2, 5, 6, 7});
  CHECK_THROWS_AS(parse_real_list(""), ValidationError);
  CHECK(find_command("nope") == nullptr);
}

TEST_CASE("every command documents unit-suffixed columns") {
  for (const auto& c : study_commands()) {
    for (const auto units : {UnitSystem::natural, UnitSystem::si}) {
      for (const auto& h : c.headers(units)) {
        CHECK(h.find('_') != std::string::npos);
      }
    }
    CHECK(c.help_footer().find("result.csv columns") != std::string::npos);
  }
  const auto* c = find_command("pulse-bound");
  CHECK(column(c->headers(UnitSystem::si), "energy_J") >= 0);
  CHECK(column(c->headers(UnitSystem::natural), "energy_hbar_rad_per_s") >= 0);
}

TEST_CASE("format_number round-trips") {
  numerics::Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.uniform(-300, 300)));
    const auto s = format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(back == v);
  }
  CHECK(format_number(200.0) == "200");
}

TEST_CASE("CSV quoting follows RFC 4180") {
  Table t{{"a", "b"}, {{"plain", "with,comma"}, {"say \"hi\"", "line\nbreak"}}};
  const auto text = to_csv(t);
  CHECK(text.find("\"with,comma\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
  CHECK(text.find("\r\n") != std::string::npos);
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2][0] == "say \"hi\"");
  CHECK(rows[2][1] == "line\nbreak");
}

TEST_CASE("SVG plot is self-contained") {
  PlotSpec p{"t", "x", "y", true, true, {{"s", {1, 10, 100}, {2, 20, 200}}, {"neg", {-1, 1}, {1, 1}}}};
  const auto svg = render_svg(p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("run writes artifacts on success and nothing on failure") {
  const auto ok = fresh_dir("ok");
  auto cfg = config("squeeze-opt", {{"epsilon", "1e-4"}}, ok);
  cfg.plot = true;
  CHECK(run(cfg) == exit_ok);
  CHECK(fs::exists(ok / "result.csv"));
  CHECK(fs::exists(ok / "plot.svg"));
  const auto report = nlohmann::json::parse(slurp(ok / "report.json"));
  const auto& row = report.at("results").at(0);
  CHECK(row.at("e_min_over_hw").get<double>() == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(std::abs(row.at("r_star").get<double>() - 2.3026) < 1e-4);
  for (const auto& e : fs::directory_iterator(ok)) CHECK(e.path().extension() != ".tmp");

  const auto missing = fresh_dir("missing");
  CHECK(run(config("pulse-bound", {}, missing)) == exit_validation);
  CHECK_FALSE(fs::exists(missing));
  CHECK(run(config("frobnicate", {}, missing)) == exit_validation);
  CHECK_FALSE(fs::exists(missing));
  // Under-sampled nonlinear envelope: numerical failure, still no artifacts.
  CHECK(run(config("nonlinear-bound",
                   {{"epsilon", "0.01"}, {"omega", "300"}, {"samples", "9"}, {"P", "2"}}, missing)) ==
        exit_numerical);
  CHECK_FALSE(fs::exists(missing));
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
  const auto a = produce(config("pulse-bound", {{"epsilon", "0.05,0.01"}, {"construction", "random"}}, "."));
  const auto b = produce(config("pulse-bound", {{"epsilon", "0.05,0.01"}, {"construction", "random"}}, "."));
  CHECK(a.files == b.files);
  auto other = config("pulse-bound", {{"epsilon", "0.05,0.01"}, {"construction", "random"}}, ".");
  other.seed = 2;
  CHECK(produce(other).files.at("result.csv") != a.files.at("result.csv"));
}

TEST_CASE("sweep: ordering, per-point formula and parallel determinism") {
  auto cfg = config("sweep",
                    {{"base", "pulse-bound"}, {"axis", "epsilon"}, {"values", "0.01,0.1,0.03"},
                     {"construction", "random"}},
                    ".");
  const auto serial = produce(cfg);
  cfg.parallelism = 8;
  const auto parallel = produce(cfg);
  CHECK(serial.files == parallel.files);
  CHECK(serial.exit_code == exit_ok);
  const auto rows = parse_csv(serial.files.at("result.csv"));
  REQUIRE(rows.size() == 4);
  const int eps_col = column(rows[0], "epsilon_"), bound_col = column(rows[0], "bound_"),
            omega_col = column(rows[0], "mean_omega_");
  CHECK(rows[0][0] == "sweep_epsilon_dimensionless");
  CHECK(rows[0].back() == "status");
  CHECK(rows[1][0] == "0.01");
  CHECK(rows[2][0] == "0.03");
  CHECK(rows[3][0] == "0.1");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double eps = std::stod(rows[i][static_cast<std::size_t>(eps_col)]);
    const double w = std::stod(rows[i][static_cast<std::size_t>(omega_col)]);
    const double bound = std::stod(rows[i][static_cast<std::size_t>(bound_col)]);
    CHECK(bound == doctest::Approx(std::numbers::pi * std::numbers::pi / 4 * w / eps).epsilon(1e-14));
    CHECK(rows[i].back() == "ok");
  }
}

TEST_CASE("sweep: failing points are marked and the run exits 3") {
  auto cfg = config("sweep", {{"base", "heuristic"}, {"axis", "epsilon"}, {"values", "0.5,2"}}, ".");
  const auto a = produce(cfg);
  CHECK(a.exit_code == exit_numerical);
  const auto rows = parse_csv(a.files.at("result.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].back() == "ok");
  CHECK(rows[2].back() == "validation_error");
  CHECK(nlohmann::json::parse(a.files.at("report.json")).at("failed_points") == 1);

  CHECK_THROWS_AS(produce(config("sweep", {{"base", "heuristic"}, {"axis", "zzz"}, {"values", "1"}}, ".")),
                  ValidationError);
  CHECK_THROWS_AS(produce(config("sweep", {{"base", "heuristic"}, {"axis", "epsilon"}}, ".")),
                  ValidationError);
}

TEST_CASE("sweep over alpha keeps p |alpha|^2 within 20%") {
  auto cfg = config("sweep", {{"base", "gate-sim"}, {"axis", "alpha"}, {"values", "16,4,8"},
                              {"perturbative", "0"}}, ".");
  cfg.parallelism = 3;
  const auto rows = parse_csv(produce(cfg).files.at("result.csv"));
  REQUIRE(rows.size() == 4);
  const int col = column(rows[0], "p_alpha_sq");
  double lo = 1e9, hi = 0.0;
  for (std::size_t i = 1; i < 4; ++i) {
    const double v = std::stod(rows[i][static_cast<std::size_t>(col)]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(rows[1][0] == "4");
  CHECK(hi / lo - 1.0 < 0.2);
}

TEST_CASE("JSON config loading") {
  const auto dir = fresh_dir("cfg");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.json");
    f << R"({"command": "heuristic", "seed": 4, "units": "si", "plot": true,
             "params": {"epsilon": [0.1, 0.01], "m": 2, "L": 1.5}})";
  }
  const auto c = load_config(dir / "run.json");
  CHECK(c.command == "heuristic");
  CHECK(c.seed == 4);
  CHECK(c.units == UnitSystem::si);
  CHECK(c.plot);
  CHECK(c.params.at("epsilon") == "0.1,0.01");
  CHECK(c.params.at("m") == "2");
  {
    std::ofstream f(dir / "bad.json");
    f << R"({"command": "heuristic", "colour": 1})";
  }
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ValidationError);
  CHECK_THROWS_AS(load_config(dir / "absent.json"), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("executable: exit codes, overrides and help") {
  CHECK(shell("--help") == 0);
  CHECK(shell("collision-free --help") == 0);
  CHECK(shell("frobnicate") == 2);
  CHECK(shell("") == 2);

  const auto out = fresh_dir("exe");
  CHECK(shell("counterexample --n 1..6 --g 1.0 --output " + out.string()) == 0);
  const auto rows = parse_csv(slurp(out / "result.csv"));
  REQUIRE(rows.size() == 7);
  const int pcol = column(rows[0], "p_exact");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][static_cast<std::size_t>(pcol)]) < 1e-10);

  const auto bad = fresh_dir("exe_bad");
  CHECK(shell("pulse-bound --output " + bad.string()) == 2);
  CHECK_FALSE(fs::exists(bad));
  CHECK(shell("pulse-bound --epsilon 0.1 --epsilon 0.2 --output " + bad.string()) == 2);
  CHECK(shell("pulse-bound --epsilon --output " + bad.string()) == 2);

  // Flags override the config file.
  fs::create_directories(out);
  {
    std::ofstream f(out / "c.json");
    f << R"({"command": "collision-free", "seed": 4, "params": {"epsilon": 0.01}})";
  }
  const auto ovr = fresh_dir("exe_ovr");
  CHECK(shell("--config " + (out / "c.json").string() + " --seed 9 --units si --epsilon 0.02 --output " +
              ovr.string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(ovr / "report.json"));
  CHECK(rep.at("seed") == 9);
  CHECK(rep.at("units") == "si");
  CHECK(rep.at("params").at("epsilon") == "0.02");
  CHECK(slurp(ovr / "result.csv").find("energy_J") != std::string::npos);
  fs::remove_all(out);
  fs::remove_all(ovr);
}

TEST_CASE("verify-all under tightened tolerances fails in a controlled way") {
  const auto out = fresh_dir("verify");
  CHECK(shell("verify-all --tighten 1e-12 --parallelism 4 --output " + out.string()) == 3);
  const auto rows = parse_csv(slurp(out / "verification.csv"));
  REQUIRE(rows.size() == 11);
  CHECK(rows[0][0] == "criterion");
  int failed = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) failed += rows[i][6] == "false";
  CHECK(failed > 0);
  CHECK(shell("verify-all --tighten -1 --output " + out.string()) == 2);
  fs::remove_all(out);
}
