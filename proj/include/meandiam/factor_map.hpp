#pragma once

#include <functional>
#include <optional>
#include <string>

#include "meandiam/system.hpp"

namespace meandiam {

/// Surjective equivariant map between two systems over the same group.
/// `fiber_hint` returns a closed-form preimage net for catalog maps; when
/// absent, fibers are approximated by filtering the source net.
struct FactorMap {
  System source;
  System target;
  std::function<Point(const Point&)> map;
  std::function<std::optional<NetSet>(const Point& y, double mesh)> fiber_hint;
  std::string label;
  /// Catalog annotation: pairs of fiber points are asymptotically identified
  /// along translate averages (drives which maps enter the fiber-vs-ball
  /// comparison checks).
  bool banach_proximal = false;
};

FactorMap identity_factor(const System& sys);

}  // namespace meandiam
