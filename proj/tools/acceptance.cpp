// Runs the acceptance suite once and prints one line per criterion.
// Exit 0 iff every criterion passes.

#include "gatebound/cli/verify.hpp"

#include "CLI11.hpp"

#include <cstdio>

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-10"};
  gatebound::cli::VerifyOptions opts;
  std::string csv;
  app.add_option("--tighten", opts.tighten, "Multiply every tolerance")->check(CLI::PositiveNumber);
  app.add_option("--parallelism", opts.parallelism, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--csv", csv, "Also write verification.csv here");
  CLI11_PARSE(app, argc, argv);

  const auto results = gatebound::cli::verify_all(opts);
  bool ok = true;
  for (const auto& r : results) {
    const auto* b = r.binding();
    std::printf("criterion %2d %-26s %s  %s = %s vs %s  (%.2f s, budget %.0f s)%s\n", r.id,
                r.name.c_str(), r.passed ? "PASS" : "FAIL", b ? b->label.c_str() : "-",
                b ? gatebound::cli::format_number(b->observed).c_str() : "-",
                b ? gatebound::cli::format_number(b->limit).c_str() : "-", r.seconds,
                r.budget_seconds, r.error.empty() ? "" : ("  error: " + r.error).c_str());
    ok = ok && r.passed;
  }
  if (!csv.empty()) {
    gatebound::cli::write_atomic(csv, gatebound::cli::to_csv(gatebound::cli::verification_table(results)));
  }
  return ok ? 0 : 3;
}
