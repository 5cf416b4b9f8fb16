#pragma once

// CSV serialization for estimates, verdicts, and report tables. Every number
// is printed with std::to_chars (shortest round-trip form), so identical runs
// produce byte-identical files and every value re-parses to the exact double.

#include <string>
#include <vector>

#include "meandiam/averaging.hpp"
#include "meandiam/equicontinuity.hpp"
#include "meandiam/factors.hpp"

namespace meandiam {

/// Shortest round-trip decimal form of v (std::to_chars).
std::string fmt_double(double v);

/// "true" / "false".
std::string fmt_bool(bool b);

/// RFC-4180 quoting: a field containing comma, quote, or newline is wrapped
/// in double quotes with internal quotes doubled; other fields pass through.
std::string csv_escape(const std::string& field);

/// Escaped fields joined by commas, newline-terminated.
std::string csv_row(const std::vector<std::string>& fields);

/// `label,n,window_volume,value,sup_translate,stabilized` — one row per
/// estimate, reporting the final grid window; convergence tails go to the
/// plot files.
std::string estimates_csv(const std::vector<Estimate>& ests);

/// `check,params,outcome,lhs,rhs,tolerance`.
std::string verdicts_csv(const std::vector<Verdict>& vs);

/// `fiber_y,eps,diam_estimate,density_estimate,stabilized,verdict`.
std::string regularity_csv(const RegularityReport& rep);

/// `system,check,verdict,scale_params` over the given checks in order.
std::string suite_summary_csv(const std::vector<SuiteCheck>& checks);

/// Rows of a single suite check across systems:
/// `system,verdict,lhs,rhs,scale_params,notes` (notes joined by "; ").
std::string suite_check_csv(const std::vector<SuiteCheck>& checks);

}  // namespace meandiam
