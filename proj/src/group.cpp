#include "meandiam/group.hpp"

#include <algorithm>
#include <stdexcept>

namespace meandiam {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

i64 GroupElement::norm_inf() const {
  i64 m = 0;
  for (i64 x : c) m = std::max(m, x < 0 ? -x : x);
  return m;
}

std::string GroupElement::str() const {
  if (c.size() == 1) return std::to_string(c[0]);
  std::string s = "(";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + ")";
}

GroupElement GroupElement::operator-() const {
  GroupElement r = *this;
  for (i64& x : r.c) x = -x;
  return r;
}

GroupElement operator+(const GroupElement& a, const GroupElement& b) {
  require_same_dim(a.dim(), b.dim(), "GroupElement+");
  GroupElement r = a;
  for (int i = 0; i < b.dim(); ++i) r.c[size_t(i)] += b.c[size_t(i)];
  return r;
}

GroupElement operator-(const GroupElement& a, const GroupElement& b) {
  require_same_dim(a.dim(), b.dim(), "GroupElement-");
  GroupElement r = a;
  for (int i = 0; i < b.dim(); ++i) r.c[size_t(i)] -= b.c[size_t(i)];
  return r;
}

Window Window::box1(i64 lo, i64 hi) {
  if (hi <= lo) throw std::invalid_argument("Window::box1: empty box");
  return Window{GroupElement::of(lo), {hi - lo}};
}

Window Window::cube(int d, i64 lo, i64 hi) {
  if (d < 1) throw std::invalid_argument("Window::cube: dimension must be positive");
  if (hi <= lo) throw std::invalid_argument("Window::cube: empty box");
  Window w;
  w.origin = GroupElement::zero(d);
  w.extent.assign(size_t(d), hi - lo);
  for (i64& x : w.origin.c) x = lo;
  return w;
}

Window Window::at(GroupElement origin, std::vector<i64> extent) {
  if (origin.c.size() != extent.size()) throw std::invalid_argument("Window::at: dimension mismatch");
  for (i64 e : extent)
    if (e < 1) throw std::invalid_argument("Window::at: extents must be >= 1");
  return Window{std::move(origin), std::move(extent)};
}

i64 Window::volume() const {
  i64 v = 1;
  for (i64 e : extent) v *= e;
  return v;
}

GroupElement Window::end() const {
  GroupElement e = origin;
  for (int i = 0; i < dim(); ++i) e.c[size_t(i)] += extent[size_t(i)];
  return e;
}

bool Window::contains(const GroupElement& g) const {
  if (g.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    i64 x = g.c[size_t(i)] - origin.c[size_t(i)];
    if (x < 0 || x >= extent[size_t(i)]) return false;
  }
  return true;
}

Window Window::translated(const GroupElement& g) const {
  Window w = *this;
  w.origin = origin + g;
  return w;
}

std::vector<GroupElement> Window::elements() const {
  std::vector<GroupElement> out;
  out.reserve(size_t(volume()));
  for (i64 i = 0; i < volume(); ++i) out.push_back(element_at(i));
  return out;
}

i64 Window::index_of(const GroupElement& g) const {
  i64 idx = 0;
  for (int i = 0; i < dim(); ++i) {
    i64 x = g.c[size_t(i)] - origin.c[size_t(i)];
    idx = idx * extent[size_t(i)] + x;
  }
  return idx;
}

GroupElement Window::element_at(i64 idx) const {
  GroupElement g = origin;
  for (int i = dim() - 1; i >= 0; --i) {
    g.c[size_t(i)] += idx % extent[size_t(i)];
    idx /= extent[size_t(i)];
  }
  return g;
}

std::optional<Window> Window::intersect(const Window& other) const {
  require_same_dim(dim(), other.dim(), "Window::intersect");
  Window w;
  w.origin = origin;
  w.extent = extent;
  for (int i = 0; i < dim(); ++i) {
    i64 lo = std::max(origin.c[size_t(i)], other.origin.c[size_t(i)]);
    i64 hi = std::min(end().c[size_t(i)], other.end().c[size_t(i)]);
    if (hi <= lo) return std::nullopt;
    w.origin.c[size_t(i)] = lo;
    w.extent[size_t(i)] = hi - lo;
  }
  return w;
}

Window Window::minkowski(const Window& other) const {
  require_same_dim(dim(), other.dim(), "Window::minkowski");
  Window w;
  w.origin = origin + other.origin;
  w.extent.resize(size_t(dim()));
  for (int i = 0; i < dim(); ++i)
    w.extent[size_t(i)] = extent[size_t(i)] + other.extent[size_t(i)] - 1;
  return w;
}

Window Window::hull(const Window& other) const {
  require_same_dim(dim(), other.dim(), "Window::hull");
  Window w;
  w.origin = origin;
  w.extent.resize(size_t(dim()));
  for (int i = 0; i < dim(); ++i) {
    i64 lo = std::min(origin.c[size_t(i)], other.origin.c[size_t(i)]);
    i64 hi = std::max(end().c[size_t(i)], other.end().c[size_t(i)]);
    w.origin.c[size_t(i)] = lo;
    w.extent[size_t(i)] = hi - lo;
  }
  return w;
}

std::string Window::str() const {
  std::string s = "{origin: [";
  for (int i = 0; i < dim(); ++i) {
    if (i) s += ", ";
    s += std::to_string(origin.c[size_t(i)]);
  }
  s += "], extent: [";
  for (int i = 0; i < dim(); ++i) {
    if (i) s += ", ";
    s += std::to_string(extent[size_t(i)]);
  }
  return s + "]}";
}

i64 window_measure(const Window& w) { return w.volume(); }

Window inv_product(const Window& k, const Window& kp) {
  require_same_dim(k.dim(), kp.dim(), "inv_product");
  // -K is the box with origin -(end - 1) and the same extents.
  Window neg;
  neg.origin = -(k.end());
  neg.extent = k.extent;
  for (i64& x : neg.origin.c) x += 1;
  return neg.minkowski(kp);
}

Rat folner_defect(const Window& f, const Window& k) {
  require_same_dim(f.dim(), k.dim(), "folner_defect");
  Window kf = k.minkowski(f);
  i64 inter = 0;
  if (auto w = kf.intersect(f)) inter = w->volume();
  i64 sym = kf.volume() + f.volume() - 2 * inter;
  return Rat(sym, f.volume());
}

FolnerStyle folner_style_from_string(const std::string& s) {
  if (s == "forward") return FolnerStyle::forward;
  if (s == "backward") return FolnerStyle::backward;
  if (s == "centered") return FolnerStyle::centered;
  if (s == "translated") return FolnerStyle::translated;
  throw std::invalid_argument("unknown folner style: " + s);
}

std::string to_string(FolnerStyle s) {
  switch (s) {
    case FolnerStyle::forward: return "forward";
    case FolnerStyle::backward: return "backward";
    case FolnerStyle::centered: return "centered";
    case FolnerStyle::translated: return "translated";
  }
  return "?";
}

FolnerSequence standard_folner(int d, FolnerStyle style,
                               std::function<GroupElement(i64)> schedule) {
  if (d < 1) throw std::invalid_argument("standard_folner: dimension must be positive");
  if (style == FolnerStyle::translated && !schedule)
    throw std::invalid_argument("standard_folner: translated style needs a schedule");
  FolnerSequence fs;
  fs.label = to_string(style) + (d > 1 ? "^" + std::to_string(d) : "");
  switch (style) {
    case FolnerStyle::forward:
      fs.window = [d](i64 n) { return Window::cube(d, 0, n + 1); };
      break;
    case FolnerStyle::backward:
      fs.window = [d](i64 n) { return Window::cube(d, -n, 1); };
      break;
    case FolnerStyle::centered:
      fs.window = [d](i64 n) { return Window::cube(d, -n, n + 1); };
      break;
    case FolnerStyle::translated:
      fs.window = [d, schedule](i64 n) {
        return Window::cube(d, 0, n + 1).translated(schedule(n));
      };
      break;
  }
  return fs;
}

}  // namespace meandiam
