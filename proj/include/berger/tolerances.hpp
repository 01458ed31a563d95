#pragma once

#include <cstdlib>
#include <string>

namespace berger {

/// Numerical thresholds shared by every module.
struct Tolerances {
  double exact = 1e-12;  // structural invariants of constructed matrices
  double num = 1e-9;     // derived identities
  double sol = 1e-8;     // Einstein-defect zero tests
  double rank_rel = 1e-8;
  double gap = 1e6;

  /// Defaults, overridden by BERGER_TOL_NUM / BERGER_TOL_SOL when set.
  static Tolerances from_environment() {
    Tolerances t;
    if (const char* v = std::getenv("BERGER_TOL_NUM"); v != nullptr && *v != '\0') {
      t.num = std::stod(v);
    }
    if (const char* v = std::getenv("BERGER_TOL_SOL"); v != nullptr && *v != '\0') {
      t.sol = std::stod(v);
    }
    return t;
  }
};

}  // namespace berger
