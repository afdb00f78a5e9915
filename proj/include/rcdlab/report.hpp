#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rcdlab {

enum class Verdict { Pass, Fail, VacuousPass, OutsideProofRegime, Error };

const char* to_string(Verdict v) noexcept;

/// Outcome of one inequality verifier.
///
/// `margin` holds the pointwise slack (RHS − LHS, so ≥ 0 means the
/// inequality holds) at the coordinates in `coordinates`: node positions for
/// spatial checks, times for time-grid checks, instance indices for scans.
/// `asserted` flags the entries that enter `min_margin`; boundary rows are
/// kept for inspection but not asserted.
struct InequalityReport {
  std::string name;
  std::string model;
  std::vector<std::pair<std::string, double>> params;
  std::vector<double> coordinates;
  std::vector<double> margin;
  std::vector<bool> asserted;
  double min_margin = 0.0;
  double tolerance = 1e-6;
  Verdict verdict = Verdict::Pass;
  std::string notes;
  /// Named scalar side results (log-form margins, coefficients, ...).
  std::vector<std::pair<std::string, double>> diagnostics;

  double param(const std::string& key, double fallback = 0.0) const;
  double diagnostic(const std::string& key, double fallback = 0.0) const;
};

/// Fills min_margin over the asserted entries and sets the pass/fail verdict.
/// Leaves OutsideProofRegime and VacuousPass verdicts in place when the
/// report was already labeled so.
void finalize(InequalityReport& report);

/// Canonical ordering used before serialization: by name, then params.
bool report_less(const InequalityReport& a, const InequalityReport& b);

}  // namespace rcdlab
