#pragma once

// Self-check battery behind `supra validate`: algebraic identities, energy
// balance, orders of accuracy, the stability boundary and the linear
// evanescent regime. Each check is a small, fixed experiment derived from
// the caller's physical parameters.

#include <string>
#include <vector>

#include "supra/model.hpp"

namespace supra {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationOptions {
  /// Short horizons and only the cheap checks.
  bool quick = false;
  int workers = 0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

/// `base.dt` is exercised by the stability check: whether a blow-up is
/// expected follows from check_stability(base). The remaining checks run at
/// base.dt when it is stable and at 0.05 otherwise.
ValidationReport run_validation(const ChainConfig& base, const ValidationOptions& options = {});

}  // namespace supra
