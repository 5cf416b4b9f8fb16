#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "meandiam/group.hpp"
#include "meandiam/rational.hpp"
#include "meandiam/word.hpp"

namespace meandiam {

struct Point;

/// Angle on the circle R/Z, exact rational in [0, 1).
struct CirclePoint {
  Rat angle;
  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;
};

/// Point of a full shift: an eventually periodic bi-infinite word.
struct WordPoint {
  EpWord word;
  friend bool operator==(const WordPoint&, const WordPoint&) = default;
};

/// Coding of an angle under a rotation, with the half-open convention side.
/// upper = false codes 1 on [1-alpha, 1); upper = true on (1-alpha, 1].
struct SturmianPoint {
  Rat angle;
  bool upper = false;
  friend bool operator==(const SturmianPoint&, const SturmianPoint&) = default;
};

/// Shifted copy of the lazily evaluated doubling Toeplitz word; `fill` is the
/// symbol at the single position every level leaves open.
struct ToeplitzPoint {
  i64 shift = 0;
  std::uint8_t fill = 0;
  friend bool operator==(const ToeplitzPoint&, const ToeplitzPoint&) = default;
};

/// Shifted skeleton of a partially filled periodic structure plus an
/// eventually periodic word filling the hole lattice.
struct HoleWordPoint {
  i64 shift = 0;
  EpWord filling;
  friend bool operator==(const HoleWordPoint&, const HoleWordPoint&) = default;
};

/// Residue modulo the deepest period of an odometer.
struct OdometerPoint {
  i64 value = 0;
  friend bool operator==(const OdometerPoint&, const OdometerPoint&) = default;
};

/// Z plus two endpoints.
struct CompactPoint {
  enum Kind : std::uint8_t { neg_inf, finite, pos_inf };
  Kind kind = finite;
  i64 m = 0;
  friend bool operator==(const CompactPoint&, const CompactPoint&) = default;
};

/// Two copies of Z glued along a single point at infinity.
struct GluedPoint {
  enum Kind : std::uint8_t { hat, check, inf };
  Kind kind = inf;
  i64 n = 0;
  friend bool operator==(const GluedPoint&, const GluedPoint&) = default;
};

/// Z plus one point at infinity (both ends identified).
struct OnePointPoint {
  bool inf = true;
  i64 m = 0;
  friend bool operator==(const OnePointPoint&, const OnePointPoint&) = default;
};

/// Tuple of factor points.
struct ProductPoint {
  std::vector<Point> parts;
  friend bool operator==(const ProductPoint&, const ProductPoint&);
};

/// Finite set of base points: a point of a hyperspace system. Canonically
/// sorted so equal sets compare equal.
struct SetPoint {
  std::vector<Point> elems;
  friend bool operator==(const SetPoint&, const SetPoint&);
};

using PointPayload =
    std::variant<CirclePoint, WordPoint, SturmianPoint, ToeplitzPoint, HoleWordPoint,
                 OdometerPoint, CompactPoint, GluedPoint, OnePointPoint, ProductPoint, SetPoint>;

struct Point {
  PointPayload v;

  template <typename T>
  const T& as() const {
    return std::get<T>(v);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }

  friend bool operator==(const Point& a, const Point& b) { return a.v == b.v; }
  std::string str() const;
};

/// Total order used for canonical sorting of nets and set points.
bool point_less(const Point& a, const Point& b);

inline bool operator==(const ProductPoint& a, const ProductPoint& b) { return a.parts == b.parts; }
inline bool operator==(const SetPoint& a, const SetPoint& b) { return a.elems == b.elems; }

template <typename T>
Point make_point(T payload) {
  return Point{PointPayload{std::move(payload)}};
}

}  // namespace meandiam
