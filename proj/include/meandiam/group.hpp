#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meandiam/rational.hpp"

namespace meandiam {

using i64 = std::int64_t;

/// Element of Z^d under componentwise addition.
struct GroupElement {
  std::vector<i64> c;

  static GroupElement zero(int d) { return GroupElement{std::vector<i64>(size_t(d), 0)}; }
  static GroupElement of(i64 x) { return GroupElement{{x}}; }

  int dim() const { return int(c.size()); }
  i64 norm_inf() const;
  std::string str() const;

  GroupElement operator-() const;
  friend GroupElement operator+(const GroupElement& a, const GroupElement& b);
  friend GroupElement operator-(const GroupElement& a, const GroupElement& b);
  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.c == b.c; }
  friend bool operator<(const GroupElement& a, const GroupElement& b) { return a.c < b.c; }
};

/// Axis-aligned box in Z^d: origin plus positive extents. These are the
/// compact windows every average in the library runs over; cardinality is
/// the counting measure.
struct Window {
  GroupElement origin;
  std::vector<i64> extent;

  static Window box1(i64 lo, i64 hi);          // [lo, hi) in Z^1
  static Window cube(int d, i64 lo, i64 hi);   // [lo, hi)^d
  static Window at(GroupElement origin, std::vector<i64> extent);

  int dim() const { return int(extent.size()); }
  i64 volume() const;
  GroupElement end() const;  // exclusive upper corner
  bool contains(const GroupElement& g) const;
  Window translated(const GroupElement& g) const;

  /// Row-major enumeration; the fixed order all deterministic reductions use.
  std::vector<GroupElement> elements() const;
  i64 index_of(const GroupElement& g) const;
  GroupElement element_at(i64 idx) const;

  std::optional<Window> intersect(const Window& other) const;
  Window minkowski(const Window& other) const;  // {a + b}
  Window hull(const Window& other) const;       // bounding box of the union

  friend bool operator==(const Window& a, const Window& b) {
    return a.origin == b.origin && a.extent == b.extent;
  }
  std::string str() const;
};

i64 window_measure(const Window& w);

/// {-a + b : a in k, b in kp}; for boxes this is again a box.
Window inv_product(const Window& k, const Window& kp);

/// |F symmetric-difference (K + F)| / |F|, exact.
Rat folner_defect(const Window& f, const Window& k);

enum class FolnerStyle { forward, backward, centered, translated };

FolnerStyle folner_style_from_string(const std::string& s);
std::string to_string(FolnerStyle s);

/// A sequence of windows indexed by n >= 1. Averages follow these; the
/// translated style shifts forward boxes by a user schedule.
struct FolnerSequence {
  std::function<Window(i64)> window;
  std::string label;
};

FolnerSequence standard_folner(int d, FolnerStyle style,
                               std::function<GroupElement(i64)> schedule = nullptr);

}  // namespace meandiam
