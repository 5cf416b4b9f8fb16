#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "meandiam/group.hpp"
#include "meandiam/system.hpp"

namespace meandiam {

enum class Mode { along_folner, banach_sup };
std::string mode_to_string(Mode mode);

enum class Outcome { holds, fails, inconclusive };
std::string outcome_to_string(Outcome o);

/// Bounded observable on a system. `bound` is a declared sup-norm bound used
/// by the lemma checkers; estimators never clamp against it.
struct Observable {
  std::function<double(const Point&)> evaluate;
  double bound = 1.0;
  std::string label;
};

/// Observable already pushed to the group: g -> f(g.x) (or a set profile).
struct OrbitObservable {
  std::function<double(const GroupElement&)> evaluate;
  double bound = 1.0;
  std::string label;
};

struct EstimatorParams {
  i64 n_min = 10;
  i64 n_max = 10000;
  double grid_ratio = 1.3;
  double tail_frac = 0.5;
  /// Translate search radius for the Banach sup; 0 means "use n_max".
  i64 radius = 0;
  double tol_abs = 1e-9;
  /// Tail-variation allowance relative to the tail magnitude; stabilization
  /// uses max(tol_abs, stab_rel * max|tail|) so slowly drifting O(1/n) tails
  /// are not spuriously declared stable.
  double stab_rel = 0.05;
  int threads = 1;

  i64 effective_radius() const { return radius > 0 ? radius : n_max; }
};

/// Default comparison tolerance: 1e-9 for exact-arithmetic systems, 1e-6
/// otherwise.
double default_tolerance(const System& sys);

struct TailEntry {
  i64 n = 0;
  i64 window_volume = 0;
  /// Untranslated window average at this n.
  double value = 0;
  /// Sup over searched translates (== value in along mode).
  double sup_translate = 0;
};

struct Estimate {
  double value = 0;
  Mode mode = Mode::along_folner;
  bool stabilized = false;
  std::vector<TailEntry> tail;
  i64 search_radius = 0;
  std::string label;
  /// Modulus-probe slack attached when translated diameters have no covering
  /// certificate; 0 for profiles that are exact under translation.
  double net_gap = 0;
};

/// Geometric grid n_min..n_max with ratio grid_ratio; n_max always included.
std::vector<i64> estimator_grid(const EstimatorParams& p);

/// Index of the first grid entry belonging to the trailing tail_frac.
size_t tail_start_index(size_t entries, double tail_frac);

/// (1/|K|) sum over g in K of f(g.x), fixed-order accumulation.
double window_average(const Window& K, const Observable& f, const System& sys, const Point& x);

/// Limsup proxy along the Folner sequence: max over the trailing tail_frac of
/// the grid; stabilized when the tail variation is within tolerance or when
/// the tail is monotone toward the limit (non-increasing for upper estimates,
/// non-decreasing for lower ones), in which case the reported value is a
/// certified one-sided bound even though the sequence is still moving.
Estimate mean_along(const FolnerSequence& F, const Observable& f, const System& sys,
                    const Point& x, const EstimatorParams& p);

/// Stricter settledness test than Estimate::stabilized: true only when the
/// trailing tail has converged to within the stabilization tolerance (for
/// banach-mode estimates this coincides with the interior-attainment flag).
/// Use it to accept a strict-inequality witness, where a one-sided monotone
/// bound is not enough evidence.
bool tail_converged(const Estimate& est, const EstimatorParams& p);

/// Bounding box of every grid window, Minkowski-padded by the search cube in
/// banach mode: the domain a cached orbit profile must cover so that every
/// window average the estimator forms reads inside it.
Window estimator_domain(const FolnerSequence& F, const EstimatorParams& p, int dim, Mode mode);

/// Translate-sup proxy: per grid n, sup over |h|_inf <= radius of the
/// (F_n + h)-average; value is the last-n figure and stabilized requires the
/// sup to be attained strictly inside the search ball.
Estimate banach_mean(const FolnerSequence& F, const Observable& f, const System& sys,
                     const Point& x, const EstimatorParams& p);

/// Group-level variants used by densities and set profiles.
Estimate orbit_mean_along(const FolnerSequence& F, const OrbitObservable& f, int dim,
                          const EstimatorParams& p);
Estimate orbit_banach_mean(const FolnerSequence& F, const OrbitObservable& f, int dim,
                           const EstimatorParams& p);

/// Orbit profile of g -> diam(g.A) with closed-form fast paths: constant for
/// isometric actions, nearest-disagreement sweeps for symbolic systems, and
/// factorwise combination for cartesian product nets. `gap` carries the
/// modulus-probe slack when only the generic pointwise path applies.
struct DiamProfile {
  OrbitObservable fn;
  double gap = 0;
};
DiamProfile diam_profile(const System& sys, const NetSet& A, const Window& domain,
                         const EstimatorParams& p);

Estimate mean_diameter_along(const FolnerSequence& F, const System& sys, const NetSet& A,
                             const EstimatorParams& p);
Estimate mean_diameter(const FolnerSequence& F, const System& sys, const NetSet& A,
                       const EstimatorParams& p);

Estimate weyl_distance(const FolnerSequence& F, const System& sys, const Point& x, const Point& y,
                       const EstimatorParams& p);
Estimate besicovitch_distance(const FolnerSequence& F, const System& sys, const Point& x,
                              const Point& y, const EstimatorParams& p);

using GroupPredicate = std::function<bool(const GroupElement&)>;

struct DensityReport {
  Estimate upper_along;
  Estimate lower_along;
  Estimate upper_banach;
  std::string set_label;
};

/// (upper, lower) asymptotic density proxies along F (limsup-max / liminf-min
/// over the grid tail of exact window counts).
std::pair<Estimate, Estimate> density_along(const FolnerSequence& F, const GroupPredicate& S,
                                            int dim, const EstimatorParams& p);
Estimate upper_banach_density(const FolnerSequence& F, const GroupPredicate& S, int dim,
                              const EstimatorParams& p);
DensityReport density_report(const FolnerSequence& F, const GroupPredicate& S, int dim,
                             const EstimatorParams& p, std::string set_label);

struct Verdict {
  std::string check;
  std::string params;
  Outcome outcome = Outcome::inconclusive;
  double lhs = 0;
  double rhs = 0;
  double tolerance = 0;
  std::vector<std::string> notes;
};

/// Subadditivity of the window functional H(K) = sum_{g in K} f(g):
/// H(K') <= (1/|K|) sum_{g in K^-1 K'} H(K + g), both sides summed exactly.
Verdict check_S_property(const std::function<double(const GroupElement&)>& f, const Window& K,
                         const Window& Kp, double tol);

/// Average transfer of the majorizing relation: when f is (eps/2)-delta'-
/// majorizing for h on the sampled points (precondition, checked first, h
/// normalized to bound <= 1), every sampled x whose f-average estimate is
/// <= eps*delta'/4 must have an h-average estimate <= eps + tol.
Verdict check_majorizing_transfer(const FolnerSequence& F, const Observable& f,
                                  const Observable& h, const System& sys, double eps,
                                  double delta_prime, const NetSet& points,
                                  const EstimatorParams& p);

/// The four average-vs-density implications for G_{x,eps} = {g : f(g.x) > eps}:
/// (i) along-average <= eps^2 implies upper along density <= eps;
/// (ii) upper along density <= eps implies along-average <= (bound+1) eps;
/// (iii)/(iv) the same pair with translate-sup averages and Banach density.
Verdict check_density_estimates(const FolnerSequence& F, const Observable& f, const System& sys,
                                const Point& x, double eps, const EstimatorParams& p);

}  // namespace meandiam
