#include "meandiam/point.hpp"

#include <algorithm>

namespace meandiam {

namespace {

std::string compact_str(const CompactPoint& p) {
  if (p.kind == CompactPoint::neg_inf) return "-inf";
  if (p.kind == CompactPoint::pos_inf) return "+inf";
  return std::to_string(p.m);
}

std::string glued_str(const GluedPoint& p) {
  if (p.kind == GluedPoint::inf) return "inf";
  return (p.kind == GluedPoint::hat ? "hat:" : "check:") + std::to_string(p.n);
}

struct StrVisitor {
  std::string operator()(const CirclePoint& p) const { return "angle=" + p.angle.str(); }
  std::string operator()(const WordPoint& p) const { return "word=" + p.word.str(); }
  std::string operator()(const SturmianPoint& p) const {
    return "code=" + p.angle.str() + (p.upper ? "+" : "-");
  }
  std::string operator()(const ToeplitzPoint& p) const {
    return "tz:j=" + std::to_string(p.shift) + ";b=" + std::to_string(int(p.fill));
  }
  std::string operator()(const HoleWordPoint& p) const {
    return "tzh:j=" + std::to_string(p.shift) + ";fill=" + p.filling.str();
  }
  std::string operator()(const OdometerPoint& p) const { return "odo=" + std::to_string(p.value); }
  std::string operator()(const CompactPoint& p) const { return compact_str(p); }
  std::string operator()(const GluedPoint& p) const { return glued_str(p); }
  std::string operator()(const OnePointPoint& p) const {
    return p.inf ? "inf" : std::to_string(p.m);
  }
  std::string operator()(const ProductPoint& p) const {
    std::string s = "(";
    for (size_t i = 0; i < p.parts.size(); ++i) {
      if (i) s += ", ";
      s += p.parts[i].str();
    }
    return s + ")";
  }
  std::string operator()(const SetPoint& p) const {
    std::string s = "{";
    size_t shown = std::min<size_t>(p.elems.size(), 4);
    for (size_t i = 0; i < shown; ++i) {
      if (i) s += ", ";
      s += p.elems[i].str();
    }
    if (p.elems.size() > shown) s += ", ... " + std::to_string(p.elems.size()) + " elems";
    return s + "}";
  }
};

// Order keys per payload, compared lexicographically after the variant index.
struct LessVisitor {
  const PointPayload& rhs;

  bool operator()(const CirclePoint& a) const {
    return a.angle < std::get<CirclePoint>(rhs).angle;
  }
  bool operator()(const WordPoint& a) const { return a.word < std::get<WordPoint>(rhs).word; }
  bool operator()(const SturmianPoint& a) const {
    const auto& b = std::get<SturmianPoint>(rhs);
    if (!(a.angle == b.angle)) return a.angle < b.angle;
    return int(a.upper) < int(b.upper);
  }
  bool operator()(const ToeplitzPoint& a) const {
    const auto& b = std::get<ToeplitzPoint>(rhs);
    if (a.shift != b.shift) return a.shift < b.shift;
    return a.fill < b.fill;
  }
  bool operator()(const HoleWordPoint& a) const {
    const auto& b = std::get<HoleWordPoint>(rhs);
    if (a.shift != b.shift) return a.shift < b.shift;
    return a.filling < b.filling;
  }
  bool operator()(const OdometerPoint& a) const {
    return a.value < std::get<OdometerPoint>(rhs).value;
  }
  bool operator()(const CompactPoint& a) const {
    const auto& b = std::get<CompactPoint>(rhs);
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.m < b.m;
  }
  bool operator()(const GluedPoint& a) const {
    const auto& b = std::get<GluedPoint>(rhs);
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.n < b.n;
  }
  bool operator()(const OnePointPoint& a) const {
    const auto& b = std::get<OnePointPoint>(rhs);
    if (a.inf != b.inf) return int(a.inf) < int(b.inf);
    return a.m < b.m;
  }
  bool operator()(const ProductPoint& a) const {
    const auto& b = std::get<ProductPoint>(rhs);
    return std::lexicographical_compare(a.parts.begin(), a.parts.end(), b.parts.begin(),
                                        b.parts.end(), point_less);
  }
  bool operator()(const SetPoint& a) const {
    const auto& b = std::get<SetPoint>(rhs);
    return std::lexicographical_compare(a.elems.begin(), a.elems.end(), b.elems.begin(),
                                        b.elems.end(), point_less);
  }
};

}  // namespace

std::string Point::str() const { return std::visit(StrVisitor{}, v); }

bool point_less(const Point& a, const Point& b) {
  if (a.v.index() != b.v.index()) return a.v.index() < b.v.index();
  if (a.v == b.v) return false;
  return std::visit(LessVisitor{b.v}, a.v);
}

}  // namespace meandiam
