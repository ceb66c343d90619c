#include <doctest.h>

#include <string>

#include "corrsense/validation.hpp"

using namespace corrsense;

TEST_CASE("fast validation passes and formats one line per check") {
  const ValidationReport report = run_validation(ValidationLevel::fast);
  CHECK(report.ok());
  CHECK(report.checks.size() >= 10);
  const std::string text = format_report(report);
  for (const auto& c : report.checks) {
    CHECK(c.status != CheckStatus::fail);
    CHECK(text.find(c.name) != std::string::npos);
  }
}

TEST_CASE("report status logic") {
  ValidationReport r;
  r.checks.push_back({"a", 0, 0, 0, CheckStatus::pass, ""});
  r.checks.push_back({"b", 0, 0, 0, CheckStatus::skipped, "guard"});
  r.checks.push_back({"c", 0, 0, 0, CheckStatus::info, ""});
  CHECK(r.ok());
  r.checks.push_back({"d", 1, 0, 0, CheckStatus::fail, ""});
  CHECK_FALSE(r.ok());
  CHECK(to_string(CheckStatus::skipped) == "SKIPPED");
  CHECK(format_report(r).find("[FAIL] d") != std::string::npos);
}
