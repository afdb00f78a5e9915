#include "rcdlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcdlab/error.hpp"

namespace rcdlab {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::VacuousPass: return "vacuous-pass";
    case Verdict::OutsideProofRegime: return "outside-proof-regime";
    case Verdict::Error: return "error";
  }
  return "unknown";
}

namespace {
double lookup(const std::vector<std::pair<std::string, double>>& items, const std::string& key,
              double fallback) {
  for (const auto& [k, v] : items)
    if (k == key) return v;
  return fallback;
}
}  // namespace

double InequalityReport::param(const std::string& key, double fallback) const {
  return lookup(params, key, fallback);
}

double InequalityReport::diagnostic(const std::string& key, double fallback) const {
  return lookup(diagnostics, key, fallback);
}

void finalize(InequalityReport& report) {
  require(report.tolerance > 0.0, ErrorCode::InvalidParameter, "report tolerance must be positive");
  if (report.asserted.size() != report.margin.size()) report.asserted.assign(report.margin.size(), true);
  double lowest = std::numeric_limits<double>::infinity();
  bool any_nan = false;
  for (std::size_t i = 0; i < report.margin.size(); ++i) {
    if (!report.asserted[i]) continue;
    if (std::isnan(report.margin[i])) any_nan = true;
    lowest = std::min(lowest, report.margin[i]);
  }
  report.min_margin = lowest;
  if (report.verdict == Verdict::OutsideProofRegime || report.verdict == Verdict::VacuousPass) return;
  if (any_nan) {
    report.verdict = Verdict::Error;
    report.notes += report.notes.empty() ? "non-finite margin" : "; non-finite margin";
    return;
  }
  report.verdict = lowest >= -report.tolerance ? Verdict::Pass : Verdict::Fail;
}

bool report_less(const InequalityReport& a, const InequalityReport& b) {
  if (a.name != b.name) return a.name < b.name;
  return a.params < b.params;
}

}  // namespace rcdlab
