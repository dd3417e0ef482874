#include "rspin/report.hpp"

#include <algorithm>

namespace rspin {

void VerificationReport::add_residual(std::vector<int> indices, const MultiPoly& residual, std::string note) {
  CaseResult c{std::move(indices), residual.is_zero(), std::nullopt, std::move(note)};
  if (!c.pass) c.residual = residual;
  cases.push_back(std::move(c));
}

void VerificationReport::add_check(std::vector<int> indices, bool pass, std::string note) {
  cases.push_back({std::move(indices), pass, std::nullopt, std::move(note)});
}

bool VerificationReport::passed() const {
  return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass; });
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const CaseResult& c) { return !c.pass; }));
}

void VerificationReport::sort_cases() {
  std::stable_sort(cases.begin(), cases.end(),
                   [](const CaseResult& a, const CaseResult& b) { return a.indices < b.indices; });
}

}  // namespace rspin
