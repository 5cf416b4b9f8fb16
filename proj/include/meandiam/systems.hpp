#pragma once

#include <map>
#include <utility>
#include <vector>

#include "meandiam/factor_map.hpp"
#include "meandiam/system.hpp"

namespace meandiam {

/// Circle rotation by the exact rational angle alpha (an approximant of the
/// irrational of interest; experiments record it).
System make_rotation(Rat alpha);

/// Full shift over {0, .., alphabet-1} with the 2^-(first disagreement)
/// metric. Net representatives extend each central window by alternating
/// tails seeded from the edge symbols.
System make_full_shift(int alphabet = 2);

/// Coding subshift of the rotation by alpha (denominator >= 10^6) under the
/// two half-open interval conventions, together with the factor map onto the
/// rotation. Symbols: 1 on [1-alpha, 1) (lower) resp. (1-alpha, 1] (upper).
std::pair<System, FactorMap> make_sturmian(Rat alpha);

/// Nested periodic fill structure. Level k assigns symbols to residues mod
/// periods[k]; residues must not collide with earlier levels. With
/// doubling_tail the all-but-one doubling pattern continues through every
/// level (fully filled in the limit); otherwise unassigned residues mod the
/// last period stay open and carry free symbols.
struct PeriodStructure {
  std::vector<i64> periods;
  std::vector<std::map<i64, std::uint8_t>> fills;
  bool doubling_tail = false;
  int odometer_depth = 12;
};

/// Canonical doubling structure: level k fills residue 2^(k-1)-1 mod 2^k,
/// symbols alternating 1,0,1,0,...
PeriodStructure doubling_structure(int odometer_depth = 12);

/// Two levels (0 mod 2 -> 1, 1 mod 4 -> 0); residue 3 mod 4 never fills, so a
/// quarter of all positions stays open at every level.
PeriodStructure quarter_hole_structure();

/// Fraction of positions assigned by levels <= level.
double filled_density(const PeriodStructure& ps, int level);

/// True when the filled density tends to 1.
bool fully_filled(const PeriodStructure& ps);

/// Orbit closure of the structure's word together with the factor map onto
/// its odometer.
std::pair<System, FactorMap> make_toeplitz(const PeriodStructure& ps);

/// Adding machine on Z/periods.back() with level metric 2^-(deepest shared
/// level). Periods must form a divisibility chain.
System make_odometer(std::vector<i64> periods);

/// Z with two endpoints, d(x,y) = |m/(1+|m|) - n/(1+|n|)| extended by +-1.
System make_two_point_compactification();

/// Z with both ends identified to one point; quotient-circle metric on the
/// embedded interval [-1, 1].
System make_one_point_compactification();

/// Two copies of Z glued along a single infinity, with a separation term
/// min(1/(1+|n|), 1/(1+|m|)) between the copies, together with the
/// projection onto the one-point compactification.
std::pair<System, FactorMap> make_double_compactification();

enum class ProductMetric { sup, weighted };

/// Implemented by product models so generic code can combine per-factor
/// diameters without materializing the cartesian point set.
class ProductStructure {
 public:
  virtual ~ProductStructure() = default;
  virtual const std::vector<System>& product_factors() const = 0;
  virtual ProductMetric product_mode() const = 0;
  virtual double combine(const std::vector<double>& per_factor) const = 0;
};

/// Product action with the sup metric (default) or the 2^-i weighted sum.
System make_product(std::vector<System> factors, ProductMetric mode = ProductMetric::sup);

/// One-point system (target of the collapse factor map).
System make_trivial();

/// Factor map from any system onto the one-point system.
FactorMap collapse_factor(const System& source);

/// Hyperspace: points are finite point-sets of the base system under the
/// discrete Hausdorff metric, acted on elementwise. The enumerated net
/// covers the singleton subspace plus the supplied seed sets; richer
/// families come from fiber hints, not from net enumeration.
System hyper_system(const System& base, std::vector<NetSet> seeds = {});

/// Wrap a system with the uniformly equivalent metric min(lambda*d, cap).
System rescale_metric(const System& base, double lambda, double cap);

}  // namespace meandiam
