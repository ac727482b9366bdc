#pragma once

#include "segscore/report.hpp"

#include <vector>

namespace segscore {

/// Checks a serialized report against the evaluation guideline:
///
///   G1 error    DSC is not among the reported metrics
///   G2 error    accuracy is reported without DSC, or is the primary metric
///   G3 warning  DSC is reported but IoU, sensitivity or specificity is not
///   G4 error    multi-class catalog without per-class results
///   G5 warning  background class included in the averages
///   G6 warning  no distribution data (histogram and quartiles)
///   G7 warning  no worst-k sample listing
///   G8 info     no sample visualization referenced
///
/// Findings come back in rule order.
std::vector<LintFinding> lint_report(const Json& report);

std::vector<LintFinding> lint_report(const DatasetReport& report);

bool has_errors(const std::vector<LintFinding>& findings);

}  // namespace segscore
