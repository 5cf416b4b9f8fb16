#pragma once

// Standalone vector-graphic convergence plots: no external plotting tool, so
// runs are reproducible anywhere the binary runs. One SVG per estimate, value
// vs window index with the sup-over-translates overlay.

#include <string>

#include "meandiam/averaging.hpp"

namespace meandiam {

/// Complete SVG document plotting the estimate's tail: the untranslated
/// window average (solid) and the translate-sup (dashed; identical in along
/// mode) against the window index n, with axis labels and the final value.
/// All numbers printed via fmt_double, so output is byte-deterministic.
std::string estimate_svg(const Estimate& est);

/// Reduce a label to filesystem-safe characters ([A-Za-z0-9._-]; every other
/// run collapses to a single '-').
std::string fs_safe(const std::string& label);

/// `{check}_{system}_{n}.svg` with both names passed through fs_safe.
std::string plot_filename(const std::string& check, const std::string& system, int n);

}  // namespace meandiam
