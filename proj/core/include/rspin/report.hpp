#pragma once

// Pass/fail records for identity checks, with residuals kept on failure.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rspin/multipoly.hpp"

namespace rspin {

struct CaseResult {
  std::vector<int> indices;
  bool pass = false;
  /// Present when the case failed and the defect is a polynomial.
  std::optional<MultiPoly> residual;
  std::string note;
};

struct VerificationReport {
  std::string identity;
  std::optional<int> r;
  std::optional<std::string> singularity;
  std::vector<CaseResult> cases;
  std::map<std::string, std::string> metadata;

  /// Records a case that passes iff `residual` is zero.
  void add_residual(std::vector<int> indices, const MultiPoly& residual, std::string note = {});
  void add_check(std::vector<int> indices, bool pass, std::string note = {});
  bool passed() const;
  std::size_t failures() const;
  /// Sorts cases by index vector so output does not depend on evaluation order.
  void sort_cases();
};

}  // namespace rspin
