#pragma once

// Factor-map machinery: finite fiber approximations, the diam-mean-proximality
// regularity battery (plain and Folner-relative), the single-fiber hyperspace
// with its induced map, and the product / composition / hyperspace-lift
// constructions used by the stability checks.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meandiam/averaging.hpp"
#include "meandiam/factor_map.hpp"
#include "meandiam/system.hpp"
#include "meandiam/systems.hpp"

namespace meandiam {

/// Finite stand-in for the preimage of y under a factor map.
struct FiberApprox {
  Point y;
  NetSet points;
  double slack = 0.0;  ///< preimage filter width actually used
  bool reliable = true;  ///< false when the filter came back empty and the
                         ///< nearest candidate was substituted, or when the
                         ///< adaptive refinement failed to settle
};

/// Largest observed movement of the image over one source mesh step; the
/// preimage filter is never run with a slack below this probe.
double factor_modulus(const FactorMap& pi, double mesh, int samples = 24);

/// Closed-form fiber when the map carries a hint; otherwise filters the
/// source net at `mesh` by image distance <= slack. Never returns an empty
/// set: if the filter strands, the nearest candidate is kept and the result
/// is flagged unreliable.
FiberApprox fiber(const FactorMap& pi, const Point& y, double mesh, double slack);

/// Hint-free fallback with the slack tightened until the fiber point count
/// agrees across two mesh halvings (refinement stability stands in for
/// correctness). Starts from slack = 2 * mesh.
FiberApprox fiber_adaptive(const FactorMap& pi, const Point& y, double mesh);

/// One (fiber, eps) cell of a regularity run.
struct RegularityRow {
  std::string fiber_y;
  double eps = 0.0;
  double diam_estimate = 0.0;
  double density_estimate = 0.0;
  bool stabilized = false;
  Outcome verdict = Outcome::inconclusive;
};

/// Outcome of a diam-mean-proximality battery. `diam_verdict` tracks the
/// per-fiber mean-diameter criterion (every estimate at or below the schedule
/// floor); `density_verdict` tracks the per-eps density criterion
/// (the relative size of {g : diam of the translated fiber > eps} stays
/// at or below eps). They are expected to agree on honest runs.
struct RegularityReport {
  std::vector<RegularityRow> rows;
  Verdict diam_verdict;
  Verdict density_verdict;
  Verdict overall;
  std::vector<std::string> notes;
  /// Per-fiber mean-diameter convergence traces (one per sampled fiber).
  std::vector<Estimate> fiber_estimates;
};

struct RegularityParams {
  EstimatorParams estimator;
  std::vector<double> eps_schedule{0.2, 0.1, 0.05};
  double fiber_mesh = 0.05;
  int fiber_samples = 10;
  unsigned seed = 2026;
  int crosscheck_samples = 8;  ///< sampled g for the translate identity check
};

/// Deterministic target-point sample: distinguished points first, then a
/// seeded draw from the target net, `count` points in total.
std::vector<Point> sample_targets(const System& target, int count, double mesh, unsigned seed);

/// Regularity battery in sup-over-translates mode: per fiber the banach mean
/// diameter, per eps the upper banach density criterion, plus the translate
/// identity cross-check diam(fiber(g.y)) = diam(g.fiber(y)) on sampled g.
RegularityReport diam_mean_proximal_test(const FactorMap& pi, const std::vector<Point>& ys,
                                         const FolnerSequence& F, const RegularityParams& rp);

/// Same battery along the given Folner sequence (plain averages and upper
/// asymptotic densities instead of translate sups).
RegularityReport f_diam_mean_proximal_test(const FactorMap& pi, const std::vector<Point>& ys,
                                           const FolnerSequence& F, const RegularityParams& rp);

/// The sub-hyperspace of sets contained in a single fiber, seeded with the
/// fibers over the target net at `mesh` (singletons are always present),
/// together with the induced map sending such a set to its base point.
std::pair<System, FactorMap> build_H_pi(const FactorMap& pi, double mesh);

/// Componentwise factor map between product systems. Fiber hints combine as
/// cartesian products tagged with the per-factor structure.
FactorMap product_factor(const std::vector<FactorMap>& pis,
                         ProductMetric mode = ProductMetric::sup);

/// Composite map phi after psi (psi: X -> Y, phi: Y -> Z).
FactorMap compose_factor(const FactorMap& phi, const FactorMap& psi);

/// Induced map between full hyperspaces, A -> image of A. The fiber hint over
/// a finite set B of target points returns the full preimage union together
/// with one selector set per rank (the k-th preimage point over each base
/// point, in canonical order).
FactorMap hyper_lift(const FactorMap& pi);

/// Spot-checks equivariance (exact) and surjectivity onto the target net
/// (within 2x mesh). Returns human-readable violation descriptions; empty
/// means the checks passed.
std::vector<std::string> validate_factor(const FactorMap& pi, double mesh, int samples = 100,
                                         unsigned seed = 7);

}  // namespace meandiam
