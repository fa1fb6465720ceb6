#pragma once

#include <string>
#include <vector>

namespace qsdi {

/// One self-check: `error` is the measured deviation, `tolerance` the
/// allowed bound, `passed` their comparison.
struct ValidationCheck {
  std::string name;
  double error = 0;
  double tolerance = 0;
  bool passed = false;
};

/// Internal consistency suite: channel structure, measurement statistics,
/// closed-form cross-checks, twirl properties, purification circuit vs the
/// recurrence, and monotonicity of the clamped key rate. Deterministic
/// (fixed RNG seed).
std::vector<ValidationCheck> run_validation();

bool all_passed(const std::vector<ValidationCheck>& checks);

}  // namespace qsdi
