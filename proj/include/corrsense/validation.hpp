#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace corrsense {

enum class ValidationLevel { fast, full };
enum class CheckStatus { pass, fail, skipped, info };

std::string_view to_string(CheckStatus status) noexcept;

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::pass;
  std::string note;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  /// No check failed (skipped and informational rows do not count).
  bool ok() const noexcept;
};

/// fast: scalar and matrix identities, symplectic spectra, K=2 Fock check at
/// N=10. full: adds quadrature cross-checks, the K <= 3 Fock sweep, the
/// truncation-tail sweeps and the small-E Taylor table.
ValidationReport run_validation(ValidationLevel level);

std::string format_report(const ValidationReport& report);

}  // namespace corrsense
