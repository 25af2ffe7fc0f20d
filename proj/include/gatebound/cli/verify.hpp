#pragma once

// End-to-end acceptance suite. Every check compares one observed number
// against a limit; tolerances are fixed here and can only be scaled by the
// tighten factor (used to provoke controlled failures).

#include "gatebound/cli/run.hpp"

#include <string>
#include <vector>

namespace gatebound::cli {

struct CriterionCheck {
  std::string label;
  double observed = 0.0;
  double limit = 0.0;
  bool upper = true; // pass when observed <= limit, else observed >= limit

  bool passed() const;
  /// observed/limit (upper) or limit/observed (lower); > 1 means failing.
  double score() const;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<CriterionCheck> checks;
  std::string error; // exception text when the criterion itself threw
  double seconds = 0.0;
  double budget_seconds = 0.0;
  bool runtime_ok = false;
  bool passed = false;

  /// Check with the highest score; the one reported in verification.csv.
  const CriterionCheck* binding() const;
};

struct VerifyOptions {
  double tighten = 1.0; // multiplies every tolerance
  std::size_t parallelism = 4;
};

std::vector<CriterionResult> verify_all(const VerifyOptions& opts = {});

/// Columns criterion, name, check, value_natural, tolerance_natural,
/// runtime_ok, passed, detail. Runtimes are left out so the file is
/// reproducible.
Table verification_table(const std::vector<CriterionResult>& results);

} // namespace gatebound::cli
