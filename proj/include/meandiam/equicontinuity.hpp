#pragma once

#include <string>
#include <vector>

#include "meandiam/averaging.hpp"
#include "meandiam/factors.hpp"

namespace meandiam {

/// One epsilon row of a diam-mean equicontinuity sweep. On `holds` the cell
/// records the widest tested delta whose ball estimate met eps; on `fails`
/// it records the smallest grid delta (balls nest, so that is the strongest
/// available witness); on `inconclusive` it records the best attempt.
struct DmeCell {
  double eps = 0;
  double delta = 0;
  double estimate = 0;
  bool stabilized = false;
  Outcome verdict = Outcome::inconclusive;
};

struct DmeReport {
  /// Point tag, or "global" / "mean-eq" for the quantified variants.
  std::string point;
  Mode mode = Mode::banach_sup;
  std::vector<DmeCell> cells;
  Outcome verdict = Outcome::inconclusive;
  std::vector<std::string> notes;
  std::string params;
  /// Convergence traces behind the sweep: per grid delta, the binding (worst)
  /// ball or pair estimate with its full window tail, kept for export.
  std::vector<Estimate> traces;
};

struct DmeParams {
  EstimatorParams estimator;
  std::vector<double> eps_schedule{0.2, 0.1, 0.05};
  /// Decreasing ball radii to sweep; empty selects the geometric default
  /// halving from 0.5 down to 4x the resolution floor `mesh` (ball nets need
  /// several points per ball).
  std::vector<double> delta_grid;
  /// Resolution floor for the default grid; each ball is netted at delta/4.
  double mesh = 0.00390625;
  /// Base points for the global and mean-equicontinuity variants.
  int sample_points = 6;
  /// Partners per base point in the mean-equicontinuity sweep.
  int pair_cap = 6;
  unsigned seed = 2026;
};

/// The grid the tests use when DmeParams::delta_grid is empty.
std::vector<double> default_delta_grid(const DmeParams& dp);

/// Pointwise diam-mean equicontinuity probe: sweeps the delta grid, runs the
/// banach-mode mean diameter of ball_net(x, delta), and declares each eps
/// row by the first delta that achieves estimate <= eps with stabilization.
/// "fails" needs a converged exceedance at the smallest grid delta. The
/// density criterion (upper banach density of {g : diam(g.ball) > eps}
/// at most eps) runs alongside; a decisive disagreement between the two
/// verdicts downgrades the report to inconclusive and leaves a note.
DmeReport dme_point_test(const System& X, const Point& x, const FolnerSequence& F,
                         const DmeParams& dp);

/// Folner-relative variant of dme_point_test: along-mode means and upper
/// asymptotic densities over F instead of the translate-sup forms.
DmeReport f_dme_point_test(const System& X, const Point& x, const FolnerSequence& F,
                           const DmeParams& dp);

/// Uniform-delta version over a deterministic sample of base points:
/// each eps row needs one delta that works for every sampled point.
DmeReport dme_global_test(const System& X, const FolnerSequence& F, const DmeParams& dp);

/// Along-mode version of the global test.
DmeReport f_dme_global_test(const System& X, const FolnerSequence& F, const DmeParams& dp);

/// Mean equicontinuity via the Weyl pseudometric: each eps row needs a delta
/// such that every sampled pair (x, x') with x' in ball_net(x, delta) has
/// Weyl distance estimate <= eps with stabilization.
DmeReport mean_equicontinuity_test(const System& X, const FolnerSequence& F,
                                   const DmeParams& dp);

struct SuiteCheck {
  std::string system;
  std::string check;
  Outcome verdict = Outcome::inconclusive;
  std::string scale_params;
  double lhs = 0;
  double rhs = 0;
  std::vector<std::string> notes;
};

struct SuiteParams {
  DmeParams dme;
  RegularityParams regularity;
  /// Ball radii for the fiber-vs-ball inequality check.
  std::vector<double> delta_schedule{0.2, 0.1, 0.05};
  /// Fibers sampled for the regularity battery and the inequality check.
  int fiber_count = 8;
  /// Run the product consistency check (X x X keeps the global verdict).
  bool product_check = true;
};

struct SuiteReport {
  std::vector<SuiteCheck> checks;
  /// Decisive contradictions (never auto-resolved): an implementation bug or
  /// scale insufficiency to investigate.
  std::vector<std::string> red_flags;
  Outcome overall = Outcome::inconclusive;
  /// Convergence traces forwarded from the sub-checks, labels prefixed by
  /// check name.
  std::vector<Estimate> traces;
};

/// Consistency battery tying the equicontinuity tests to factor regularity
/// on a system with a known equicontinuous factor map pi_eq:
///  (a) the global diam-mean equicontinuity verdict must agree with the
///      regularity verdict of pi_eq;
///  (b) fiber mean-diameter estimates stay below the worst sampled ball
///      mean-diameter at every scheduled delta (banach-proximal maps);
///  (c) the product X x X keeps the global verdict.
/// Decisive disagreements land in red_flags.
SuiteReport theorem_suite(const System& X, const FactorMap& pi_eq, const FolnerSequence& F,
                          const SuiteParams& sp);

}  // namespace meandiam
