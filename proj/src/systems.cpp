#include "meandiam/systems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace meandiam {

namespace {

constexpr i64 kMaxNetPoints = i64(1) << 20;

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i64 pos_mod(i64 a, i64 b) {
  i64 r = a % b;
  if (r < 0) r += b;
  return r;
}

/// Smallest m >= 0 with 2^-m <= mesh (m capped where 2^-m underflows to 0).
int window_radius(double mesh) {
  int m = 0;
  while (m < 1075 && std::ldexp(1.0, -m) > mesh) ++m;
  return m;
}

i64 g1(const GroupElement& g) {
  if (g.dim() != 1) throw std::invalid_argument("action: expected a rank-1 group element");
  return g.c[0];
}

void check_budget(double count, const std::string& who) {
  if (count > double(kMaxNetPoints))
    throw std::invalid_argument(who + ": net enumeration exceeds the point budget");
}

double fint(i64 m) { return double(m) / (1.0 + double(std::llabs(m))); }

double useq(i64 n) { return 1.0 / (1.0 + double(std::llabs(n))); }

std::vector<Point> cartesian_product(const std::vector<std::vector<Point>>& per,
                                     const std::string& who) {
  double total = 1;
  for (const auto& v : per) {
    if (v.empty()) throw std::invalid_argument(who + ": empty factor list");
    total *= double(v.size());
    check_budget(total, who);
  }
  std::vector<Point> out;
  out.reserve(size_t(total));
  std::vector<size_t> idx(per.size(), 0);
  while (true) {
    ProductPoint pp;
    pp.parts.reserve(per.size());
    for (size_t i = 0; i < per.size(); ++i) pp.parts.push_back(per[i][idx[i]]);
    out.push_back(make_point(std::move(pp)));
    size_t i = per.size();
    for (;;) {
      if (i == 0) return out;
      --i;
      if (++idx[i] < per[i].size()) break;
      idx[i] = 0;
    }
  }
}

// ---------------------------------------------------------------------------
// Rotation

class RotationModel final : public SystemModel {
 public:
  explicit RotationModel(Rat alpha) : alpha_(alpha.mod1()) {}

  double metric(const Point& a, const Point& b) const override {
    return circle_distance(a.as<CirclePoint>().angle, b.as<CirclePoint>().angle);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    return make_point(CirclePoint{(x.as<CirclePoint>().angle + Rat::of(g1(g)) * alpha_).mod1()});
  }

  std::vector<Point> net_points(double mesh) const override {
    i64 n = i64(std::ceil(1.0 / (2.0 * mesh)));
    if (n < 1) n = 1;
    check_budget(double(n), label());
    std::vector<Point> out;
    out.reserve(size_t(n));
    for (i64 i = 0; i < n; ++i) out.push_back(make_point(CirclePoint{Rat(i, n)}));
    return out;
  }

  /// Closed-form arc around x: a dyadic grid relative to x, so tiny radii
  /// (e.g. inside product sweeps) never enumerate the whole circle.
  std::optional<std::vector<Point>> ball_points(const Point& x, double delta,
                                                double mesh) const override {
    if (delta >= 0.25) return std::nullopt;  // generic net filter is fine and exact
    int e = 2;
    while (e < 60 && std::ldexp(1.0, -e) > mesh) ++e;
    Rat step(1, i64(1) << e);
    i64 reach = i64(std::floor(delta * std::ldexp(1.0, e)));
    const Rat& c = x.as<CirclePoint>().angle;
    std::vector<Point> out;
    out.reserve(size_t(2 * reach + 1));
    for (i64 k = -reach; k <= reach; ++k)
      out.push_back(make_point(CirclePoint{(c + Rat::of(k) * step).mod1()}));
    return out;
  }

  double diameter_bound() const override { return 0.5; }
  std::string label() const override { return "rotation(" + alpha_.str() + ")"; }
  bool isometric() const override { return true; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(CirclePoint{Rat::of(0)})};
  }

  Rat angle() const { return alpha_; }

 private:
  Rat alpha_;
};

// ---------------------------------------------------------------------------
// Full shift

class FullShiftModel final : public SystemModel {
 public:
  explicit FullShiftModel(int alphabet) : k_(alphabet) {
    if (alphabet < 2 || alphabet > 16)
      throw std::invalid_argument("make_full_shift: alphabet size must lie in [2, 16]");
  }

  double metric(const Point& a, const Point& b) const override {
    return symbolic_metric(*this, a, b);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    return make_point(WordPoint{x.as<WordPoint>().word.shifted(g1(g))});
  }

  int symbol(const Point& p, i64 n) const override { return p.as<WordPoint>().word.symbol(n); }
  bool symbolic() const override { return true; }
  int alphabet_size() const override { return k_; }

  std::vector<Point> net_points(double mesh) const override {
    int m = window_radius(mesh);
    return windows_with_fixed_center(m, {}, 0);
  }

  std::optional<std::vector<Point>> ball_points(const Point& x, double delta,
                                                double mesh) const override {
    int m = window_radius(mesh);
    int t = window_radius(delta);
    std::vector<std::uint8_t> center;
    if (t > 0) {
      center.resize(size_t(2 * t - 1));
      for (i64 n = -(t - 1); n <= t - 1; ++n)
        center[size_t(n + t - 1)] = std::uint8_t(symbol(x, n));
    }
    return windows_with_fixed_center(m, center, t);
  }

  double diameter_bound() const override { return 1.0; }
  std::string label() const override { return "fullshift(" + std::to_string(k_) + ")"; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(WordPoint{constant_word(0)}), make_point(WordPoint{constant_word(1)})};
  }

 private:
  /// All words whose window [-m, m] extends `center` (fixed on |n| < t) by
  /// free symbols on t <= |n| <= m, with alternating tails beyond.
  std::vector<Point> windows_with_fixed_center(int m, const std::vector<std::uint8_t>& center,
                                               int t) const {
    if (t > m + 1) t = m + 1;
    int free_count = 2 * (m - t + 1);
    if (free_count < 0) free_count = 0;
    check_budget(std::pow(double(k_), double(free_count)), label());
    std::vector<std::uint8_t> window(size_t(2 * m + 1), 0);
    for (i64 n = -(t - 1); n <= i64(t) - 1; ++n) window[size_t(n + m)] = center[size_t(n + t - 1)];
    std::vector<size_t> free_pos;
    for (i64 n = -m; n <= i64(m); ++n)
      if (std::llabs(n) >= t) free_pos.push_back(size_t(n + m));
    std::vector<Point> out;
    std::vector<int> digits(free_pos.size(), 0);
    while (true) {
      for (size_t i = 0; i < free_pos.size(); ++i) window[free_pos[i]] = std::uint8_t(digits[i]);
      out.push_back(make_point(WordPoint{window_word(window, -m, k_)}));
      size_t i = free_pos.size();
      for (;;) {
        if (i == 0) return out;
        --i;
        if (++digits[i] < k_) break;
        digits[i] = 0;
      }
    }
  }

  int k_;
};

// ---------------------------------------------------------------------------
// Sturmian coding of a rotation

class SturmianModel final : public SystemModel {
 public:
  explicit SturmianModel(Rat alpha) : alpha_(alpha.mod1()), beta_(Rat::of(1) - alpha_.mod1()) {
    beta_ = beta_.mod1();
    if (alpha_.den < 1000000)
      throw std::invalid_argument(
          "make_sturmian: angle denominator below 10^6 gives a misleadingly coarse coding");
  }

  double metric(const Point& a, const Point& b) const override {
    return symbolic_metric(*this, a, b);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    const auto& s = x.as<SturmianPoint>();
    return make_point(SturmianPoint{(s.angle + Rat::of(g1(g)) * alpha_).mod1(), s.upper});
  }

  int symbol(const Point& p, i64 n) const override {
    const auto& s = p.as<SturmianPoint>();
    Rat v = (s.angle + Rat::of(n) * alpha_).mod1();
    if (s.upper) return (v > beta_ || v.is_zero()) ? 1 : 0;
    return v >= beta_ ? 1 : 0;
  }
  bool symbolic() const override { return true; }
  int alphabet_size() const override { return 2; }

  std::vector<Point> net_points(double mesh) const override {
    int m = window_radius(mesh);
    std::vector<Rat> cuts;
    cuts.reserve(size_t(2 * (2 * m + 1)));
    for (i64 n = -m; n <= i64(m); ++n) {
      Rat shift = Rat::of(n) * alpha_;
      cuts.push_back((-shift).mod1());
      cuts.push_back((beta_ - shift).mod1());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Point> out;
    out.reserve(cuts.size());
    Rat half(1, 2);
    for (size_t i = 0; i < cuts.size(); ++i) {
      Rat next = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + Rat::of(1);
      Rat mid = ((cuts[i] + next) * half).mod1();
      out.push_back(make_point(SturmianPoint{mid, false}));
    }
    return out;
  }

  // Word complexity is linear, so the window-doubling resolution keeps the
  // cut-point net small while exposing the pairs that disagree beyond the
  // radius-defining window.
  double ball_resolution(double delta) const override { return delta * delta / 4.0; }

  double diameter_bound() const override { return 1.0; }
  std::string label() const override { return "sturmian(" + alpha_.str() + ")"; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(SturmianPoint{Rat::of(0), false}),
            make_point(SturmianPoint{Rat::of(0), true})};
  }

  Rat angle() const { return alpha_; }

 private:
  Rat alpha_;
  Rat beta_;
};

// ---------------------------------------------------------------------------
// Odometer

class OdometerModel final : public SystemModel {
 public:
  explicit OdometerModel(std::vector<i64> periods) : periods_(std::move(periods)) {
    if (periods_.empty()) throw std::invalid_argument("make_odometer: need at least one period");
    i64 prev = 1;
    for (i64 p : periods_) {
      if (p < 2 || p % prev != 0 || (p == prev))
        throw std::invalid_argument("make_odometer: periods must be a strictly increasing divisibility chain");
      prev = p;
    }
    p_last_ = periods_.back();
  }

  double metric(const Point& a, const Point& b) const override {
    i64 delta = pos_mod(a.as<OdometerPoint>().value - b.as<OdometerPoint>().value, p_last_);
    if (delta == 0) return 0.0;
    int depth = 0;
    while (depth < int(periods_.size()) && delta % periods_[size_t(depth)] == 0) ++depth;
    return std::ldexp(1.0, -depth);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    return make_point(OdometerPoint{pos_mod(x.as<OdometerPoint>().value + g1(g), p_last_)});
  }

  std::vector<Point> net_points(double mesh) const override {
    int k = 0;
    while (k <= int(periods_.size()) && std::ldexp(1.0, -k) > mesh) ++k;
    i64 reps = (k == 0) ? 1 : (k <= int(periods_.size()) ? periods_[size_t(k - 1)] : p_last_);
    check_budget(double(reps), label());
    std::vector<Point> out;
    out.reserve(size_t(reps));
    for (i64 r = 0; r < reps; ++r) out.push_back(make_point(OdometerPoint{r}));
    return out;
  }

  double diameter_bound() const override { return 1.0; }
  std::string label() const override { return "odometer(" + std::to_string(p_last_) + ")"; }
  bool isometric() const override { return true; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(OdometerPoint{0})};
  }

  const std::vector<i64>& periods() const { return periods_; }

 private:
  std::vector<i64> periods_;
  i64 p_last_ = 2;
};

// ---------------------------------------------------------------------------
// Doubling (regular) Toeplitz word

class DoublingToeplitzModel final : public SystemModel {
 public:
  DoublingToeplitzModel(std::uint8_t s_odd, std::uint8_t s_even)
      : s_odd_(s_odd), s_even_(s_even) {
    if (s_odd_ > 1 || s_even_ > 1 || s_odd_ == s_even_)
      throw std::invalid_argument("toeplitz: doubling levels need two distinct binary symbols");
  }

  double metric(const Point& a, const Point& b) const override {
    return symbolic_metric(*this, a, b);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    const auto& t = x.as<ToeplitzPoint>();
    return make_point(ToeplitzPoint{t.shift + g1(g), t.fill});
  }

  int symbol(const Point& p, i64 n) const override {
    const auto& t = p.as<ToeplitzPoint>();
    i64 m = n + t.shift;
    if (m == -1) return t.fill;
    int v = std::countr_zero(std::uint64_t(m + 1));
    return (v % 2 == 0) ? s_odd_ : s_even_;
  }
  bool symbolic() const override { return true; }
  int alphabet_size() const override { return 2; }

  std::vector<Point> net_points(double mesh) const override {
    int w = window_radius(mesh);
    int big = 0;
    while ((i64(1) << big) < 2 * i64(w) + 2) ++big;
    if (big + 2 > 24) throw std::invalid_argument(label() + ": net enumeration exceeds the point budget");
    i64 scan = i64(1) << (big + 2);
    auto signature = [&](const Point& p) {
      std::string s(size_t(2 * w + 1), '0');
      for (i64 n = -w; n <= i64(w); ++n) s[size_t(n + w)] = char('0' + symbol(p, n));
      return s;
    };
    std::set<std::string> seen;
    std::vector<Point> out;
    for (i64 j = -(i64(w) + 1); j <= i64(w) - 1; ++j)
      for (int b = 0; b < 2; ++b) {
        Point p = make_point(ToeplitzPoint{j, std::uint8_t(b)});
        if (seen.insert(signature(p)).second) out.push_back(p);
      }
    for (i64 j = 0; j < scan; ++j) {
      Point p = make_point(ToeplitzPoint{j, 0});
      if (seen.insert(signature(p)).second) out.push_back(p);
    }
    return out;
  }

  /// Closed-form ball: a point close to x is a shift that realigns every
  /// doubling level with a slot inside the agreement window, so the in-ball
  /// partners live on dyadic lattices 2^v * odd (their word distance can sit
  /// far below any feasible net mesh while their orbit-mean separation stays
  /// large). The candidate family is independent of the radius and gets
  /// filtered by the exact metric, so balls sampled at different radii nest
  /// and their mean diameters stay monotone.
  std::optional<std::vector<Point>> ball_points(const Point& x, double delta,
                                                double /*mesh*/) const override {
    const auto& t = x.as<ToeplitzPoint>();
    std::vector<i64> shifts;
    for (i64 j = 1; j <= 16; ++j) shifts.push_back(j);
    for (int v = 0; v <= 12; ++v)
      for (i64 k : {i64(1), i64(3)}) shifts.push_back(k << v);
    std::sort(shifts.begin(), shifts.end());
    shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
    std::vector<Point> out;
    for (i64 j : shifts)
      for (i64 s : {j, -j})
        for (int b = 0; b < 2; ++b) {
          Point p = make_point(ToeplitzPoint{t.shift + s, std::uint8_t(b)});
          if (symbolic_metric(*this, x, p) <= delta) out.push_back(p);
        }
    return out;
  }

  double diameter_bound() const override { return 1.0; }
  std::string label() const override { return "toeplitz-doubling"; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(ToeplitzPoint{0, 0}), make_point(ToeplitzPoint{0, 1})};
  }

 private:
  std::uint8_t s_odd_;
  std::uint8_t s_even_;
};

// ---------------------------------------------------------------------------
// Partially filled (hole) Toeplitz word

class HoleToeplitzModel final : public SystemModel {
 public:
  HoleToeplitzModel(std::vector<i64> periods, std::vector<std::map<i64, std::uint8_t>> fills)
      : periods_(std::move(periods)), fills_(std::move(fills)) {
    p_last_ = periods_.back();
    for (i64 r = 0; r < p_last_; ++r)
      if (skeleton(r) < 0) holes_.push_back(r);
  }

  double metric(const Point& a, const Point& b) const override {
    return symbolic_metric(*this, a, b);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    const auto& t = x.as<HoleWordPoint>();
    return make_point(HoleWordPoint{t.shift + g1(g), t.filling});
  }

  int symbol(const Point& p, i64 n) const override {
    const auto& t = p.as<HoleWordPoint>();
    i64 m = n + t.shift;
    int s = skeleton(m);
    if (s >= 0) return s;
    return t.filling.symbol(hole_index(m));
  }
  bool symbolic() const override { return true; }
  int alphabet_size() const override { return 2; }

  std::vector<Point> net_points(double mesh) const override {
    int w = window_radius(mesh);
    std::vector<Point> out;
    std::set<std::string> seen;
    for (i64 j = 0; j < p_last_; ++j) {
      std::vector<i64> hole_idx;
      for (i64 m = j - w; m <= j + w; ++m)
        if (skeleton(m) < 0) hole_idx.push_back(hole_index(m));
      size_t c = hole_idx.size();
      if (c > 16)
        throw std::invalid_argument(label() + ": net enumeration exceeds the point budget");
      i64 t_lo = hole_idx.empty() ? 0 : hole_idx.front();
      for (i64 mask = 0; mask < (i64(1) << c); ++mask) {
        std::vector<std::uint8_t> pattern(c);
        for (size_t i = 0; i < c; ++i) pattern[i] = std::uint8_t((mask >> i) & 1);
        Point p = make_point(HoleWordPoint{j, window_word(pattern, t_lo, 2)});
        std::string s(size_t(2 * w + 1), '0');
        for (i64 n = -w; n <= i64(w); ++n) s[size_t(n + w)] = char('0' + symbol(p, n));
        if (seen.insert(s).second) out.push_back(p);
      }
    }
    return out;
  }

  // Same window-doubling resolution as the other word systems; the hole
  // pattern enumeration bounds the window, which in turn bounds usable delta.
  double ball_resolution(double delta) const override { return delta * delta / 4.0; }

  double diameter_bound() const override { return 1.0; }
  std::string label() const override {
    return "toeplitz(p=" + std::to_string(p_last_) + ",holes=" + std::to_string(holes_.size()) +
           ")";
  }
  std::vector<Point> distinguished_points() const override {
    return {make_point(HoleWordPoint{0, constant_word(0)}),
            make_point(HoleWordPoint{0, constant_word(1)})};
  }

  int skeleton(i64 m) const {
    for (size_t k = 0; k < periods_.size(); ++k) {
      auto it = fills_[k].find(pos_mod(m, periods_[k]));
      if (it != fills_[k].end()) return it->second;
    }
    return -1;
  }

  i64 hole_index(i64 m) const {
    i64 q = floor_div(m, p_last_);
    i64 r = pos_mod(m, p_last_);
    auto it = std::lower_bound(holes_.begin(), holes_.end(), r);
    return q * i64(holes_.size()) + (it - holes_.begin());
  }

  i64 period() const { return p_last_; }
  size_t hole_count() const { return holes_.size(); }

 private:
  std::vector<i64> periods_;
  std::vector<std::map<i64, std::uint8_t>> fills_;
  std::vector<i64> holes_;
  i64 p_last_ = 2;
};

// ---------------------------------------------------------------------------
// Compactifications of Z

class TwoPointModel final : public SystemModel {
 public:
  double metric(const Point& a, const Point& b) const override {
    return std::abs(value(a) - value(b));
  }

  Point act(const GroupElement& g, const Point& x) const override {
    const auto& c = x.as<CompactPoint>();
    if (c.kind != CompactPoint::finite) return x;
    return make_point(CompactPoint{CompactPoint::finite, c.m + g1(g)});
  }

  std::vector<Point> net_points(double mesh) const override {
    i64 cap = i64(std::ceil(1.0 / mesh));
    check_budget(2.0 * double(cap) + 3.0, label());
    std::vector<Point> out;
    out.reserve(size_t(2 * cap + 3));
    out.push_back(make_point(CompactPoint{CompactPoint::neg_inf, 0}));
    for (i64 m = -cap; m <= cap; ++m) out.push_back(make_point(CompactPoint{CompactPoint::finite, m}));
    out.push_back(make_point(CompactPoint{CompactPoint::pos_inf, 0}));
    return out;
  }

  double diameter_bound() const override { return 2.0; }
  std::string label() const override { return "two-point-Z"; }
  bool exact() const override { return false; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(CompactPoint{CompactPoint::neg_inf, 0}),
            make_point(CompactPoint{CompactPoint::finite, 0}),
            make_point(CompactPoint{CompactPoint::pos_inf, 0})};
  }

  static double value(const Point& p) {
    const auto& c = p.as<CompactPoint>();
    if (c.kind == CompactPoint::neg_inf) return -1.0;
    if (c.kind == CompactPoint::pos_inf) return 1.0;
    return fint(c.m);
  }
};

class OnePointModel final : public SystemModel {
 public:
  double metric(const Point& a, const Point& b) const override {
    double e = std::abs(value(a) - value(b));
    return std::min(e, 2.0 - e);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    const auto& c = x.as<OnePointPoint>();
    if (c.inf) return x;
    return make_point(OnePointPoint{false, c.m + g1(g)});
  }

  std::vector<Point> net_points(double mesh) const override {
    i64 cap = i64(std::ceil(1.0 / mesh));
    check_budget(2.0 * double(cap) + 2.0, label());
    std::vector<Point> out;
    out.reserve(size_t(2 * cap + 2));
    out.push_back(make_point(OnePointPoint{true, 0}));
    for (i64 m = -cap; m <= cap; ++m) out.push_back(make_point(OnePointPoint{false, m}));
    return out;
  }

  double diameter_bound() const override { return 1.0; }
  std::string label() const override { return "one-point-Z"; }
  bool exact() const override { return false; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(OnePointPoint{true, 0}), make_point(OnePointPoint{false, 0})};
  }

  static double value(const Point& p) {
    const auto& c = p.as<OnePointPoint>();
    return c.inf ? 1.0 : fint(c.m);
  }
};

/// Two copies of the two-point compactification glued at a shared infinity.
/// Distances within a copy follow the quotient circle through the shared
/// point; across copies a separation of min(u(a), u(b)) is added, capped by
/// the route through infinity so the triangle inequality survives.
class GluedModel final : public SystemModel {
 public:
  double metric(const Point& a, const Point& b) const override {
    const auto& x = a.as<GluedPoint>();
    const auto& y = b.as<GluedPoint>();
    if (x.kind == GluedPoint::inf && y.kind == GluedPoint::inf) return 0.0;
    if (x.kind == GluedPoint::inf) return useq(y.n);
    if (y.kind == GluedPoint::inf) return useq(x.n);
    double c = circle_part(x.n, y.n);
    if (x.kind == y.kind) return c;
    double ua = useq(x.n), ub = useq(y.n);
    return std::min(c + std::min(ua, ub), ua + ub);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    const auto& p = x.as<GluedPoint>();
    if (p.kind == GluedPoint::inf) return x;
    return make_point(GluedPoint{p.kind, p.n + g1(g)});
  }

  std::vector<Point> net_points(double mesh) const override {
    i64 cap = i64(std::ceil(1.0 / mesh));
    check_budget(4.0 * double(cap) + 3.0, label());
    std::vector<Point> out;
    out.reserve(size_t(4 * cap + 3));
    out.push_back(make_point(GluedPoint{GluedPoint::inf, 0}));
    for (i64 m = -cap; m <= cap; ++m) {
      out.push_back(make_point(GluedPoint{GluedPoint::hat, m}));
      out.push_back(make_point(GluedPoint{GluedPoint::check, m}));
    }
    return out;
  }

  double diameter_bound() const override { return 2.0; }
  std::string label() const override { return "glued-double-Z"; }
  bool exact() const override { return false; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(GluedPoint{GluedPoint::inf, 0}),
            make_point(GluedPoint{GluedPoint::hat, 0}),
            make_point(GluedPoint{GluedPoint::check, 0})};
  }

 private:
  static double circle_part(i64 a, i64 b) {
    double e = std::abs(fint(a) - fint(b));
    return std::min(e, 2.0 - e);
  }
};

// ---------------------------------------------------------------------------
// Product

class ProductModel final : public SystemModel, public ProductStructure {
 public:
  ProductModel(std::vector<System> factors, ProductMetric mode)
      : factors_(std::move(factors)), mode_(mode) {
    if (factors_.empty()) throw std::invalid_argument("make_product: need at least one factor");
    dim_ = factors_[0].dimension();
    for (const System& s : factors_) {
      if (!s.valid()) throw std::invalid_argument("make_product: invalid factor");
      if (s.dimension() != dim_)
        throw std::invalid_argument("make_product: factors act through different ranks");
    }
  }

  const std::vector<System>& product_factors() const override { return factors_; }
  ProductMetric product_mode() const override { return mode_; }

  double combine(const std::vector<double>& per_factor) const override {
    if (mode_ == ProductMetric::sup) {
      double m = 0;
      for (double v : per_factor) m = std::max(m, v);
      return m;
    }
    double s = 0;
    for (size_t i = 0; i < per_factor.size(); ++i) s += std::ldexp(per_factor[i], -int(i));
    return s;
  }

  int dimension() const override { return dim_; }

  double metric(const Point& a, const Point& b) const override {
    const auto& pa = a.as<ProductPoint>().parts;
    const auto& pb = b.as<ProductPoint>().parts;
    std::vector<double> per(factors_.size());
    for (size_t i = 0; i < factors_.size(); ++i) per[i] = factors_[i].metric(pa[i], pb[i]);
    return combine(per);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    const auto& parts = x.as<ProductPoint>().parts;
    ProductPoint out;
    out.parts.reserve(parts.size());
    for (size_t i = 0; i < factors_.size(); ++i) out.parts.push_back(factors_[i].act(g, parts[i]));
    return make_point(std::move(out));
  }

  std::vector<Point> net_points(double mesh) const override { return net_set(mesh)->points; }

  std::optional<NetSet> net_set(double mesh) const override {
    double factor_mesh = (mode_ == ProductMetric::sup) ? mesh : mesh / 2.0;
    auto factor_nets = std::make_shared<std::vector<NetSet>>();
    std::vector<std::vector<Point>> per;
    for (const System& s : factors_) {
      factor_nets->push_back(s.net(factor_mesh));
      per.push_back(factor_nets->back().points);
    }
    NetSet out;
    out.points = cartesian_product(per, label());
    out.factors = std::move(factor_nets);
    return out;
  }

  std::optional<NetSet> ball_set(const Point& x, double delta, double mesh) const override {
    if (mode_ != ProductMetric::sup) return std::nullopt;
    const auto& parts = x.as<ProductPoint>().parts;
    auto factor_nets = std::make_shared<std::vector<NetSet>>();
    std::vector<std::vector<Point>> per;
    for (size_t i = 0; i < factors_.size(); ++i) {
      // Each factor picks the resolution that makes its own delta-ball faithful.
      double fm = std::min(mesh, factors_[i].ball_resolution(delta));
      factor_nets->push_back(ball_net(factors_[i], parts[i], delta, fm));
      per.push_back(factor_nets->back().points);
    }
    NetSet out;
    out.points = cartesian_product(per, label());
    out.factors = std::move(factor_nets);
    return out;
  }

  double diameter_bound() const override {
    std::vector<double> per;
    per.reserve(factors_.size());
    for (const System& s : factors_) per.push_back(s.diameter_bound());
    return combine(per);
  }

  std::string label() const override {
    std::string s = mode_ == ProductMetric::sup ? "prod[sup](" : "prod[wt](";
    for (size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += " x ";
      s += factors_[i].label();
    }
    return s + ")";
  }

  bool exact() const override {
    for (const System& s : factors_)
      if (!s.exact()) return false;
    return true;
  }

  bool isometric() const override {
    for (const System& s : factors_)
      if (!s.m().isometric()) return false;
    return true;
  }

  std::vector<Point> distinguished_points() const override {
    std::vector<std::vector<Point>> per;
    double total = 1;
    for (const System& s : factors_) {
      auto d = s.m().distinguished_points();
      if (d.empty()) d = {s.net(s.diameter_bound() > 0 ? s.diameter_bound() : 1.0).points.front()};
      total *= double(d.size());
      per.push_back(std::move(d));
    }
    if (total > 64) {
      ProductPoint pp;
      for (const auto& v : per) pp.parts.push_back(v.front());
      return {make_point(std::move(pp))};
    }
    return cartesian_product(per, label());
  }

  /// Sampling never needs the cartesian net: draw a seeded pool from each
  /// factor and zip them coordinatewise.
  std::optional<std::vector<Point>> sample_pool(double mesh, int count,
                                                unsigned seed) const override {
    std::vector<std::vector<Point>> per;
    for (size_t i = 0; i < factors_.size(); ++i) {
      unsigned fs = seed + 101u * unsigned(i + 1);
      std::vector<Point> pool;
      if (auto sp = factors_[i].m().sample_pool(mesh, count, fs)) {
        pool = std::move(*sp);
      } else {
        NetSet net = factors_[i].net(mesh);
        std::vector<size_t> idx(net.points.size());
        std::iota(idx.begin(), idx.end(), size_t(0));
        std::mt19937 rng(fs);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (size_t k = 0; k < idx.size() && (int)pool.size() < count; ++k)
          pool.push_back(net.points[idx[k]]);
      }
      if (pool.empty()) return std::vector<Point>{};
      per.push_back(std::move(pool));
    }
    std::vector<Point> out;
    for (int i = 0; i < count; ++i) {
      ProductPoint pp;
      for (const auto& pool : per) pp.parts.push_back(pool[size_t(i) % pool.size()]);
      out.push_back(make_point(std::move(pp)));
    }
    return out;
  }

 private:
  std::vector<System> factors_;
  ProductMetric mode_;
  int dim_ = 1;
};

// ---------------------------------------------------------------------------
// Trivial (one-point) system

class TrivialModel final : public SystemModel {
 public:
  explicit TrivialModel(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("make_trivial: rank must be positive");
  }

  int dimension() const override { return dim_; }
  double metric(const Point&, const Point&) const override { return 0.0; }
  Point act(const GroupElement&, const Point& x) const override { return x; }
  std::vector<Point> net_points(double) const override {
    return {make_point(OdometerPoint{0})};
  }
  double diameter_bound() const override { return 0.0; }
  std::string label() const override { return "trivial"; }
  bool isometric() const override { return true; }
  std::vector<Point> distinguished_points() const override {
    return {make_point(OdometerPoint{0})};
  }

 private:
  int dim_;
};

// ---------------------------------------------------------------------------
// Hyperspace

class HyperModel final : public SystemModel {
 public:
  HyperModel(System base, std::vector<Point> seeds)
      : base_(std::move(base)), seeds_(std::move(seeds)) {}

  int dimension() const override { return base_.dimension(); }

  double metric(const Point& a, const Point& b) const override {
    return hausdorff_points(base_.m(), a.as<SetPoint>().elems, b.as<SetPoint>().elems);
  }

  Point act(const GroupElement& g, const Point& x) const override {
    SetPoint out;
    out.elems.reserve(x.as<SetPoint>().elems.size());
    for (const Point& p : x.as<SetPoint>().elems) out.elems.push_back(base_.act(g, p));
    out.elems = canonical_points(std::move(out.elems));
    return make_point(std::move(out));
  }

  std::vector<Point> net_points(double mesh) const override {
    std::vector<Point> out;
    for (const Point& p : base_.net(mesh).points) out.push_back(make_point(SetPoint{{p}}));
    for (const Point& s : seeds_) out.push_back(s);
    return out;
  }

  double diameter_bound() const override { return base_.diameter_bound(); }
  std::string label() const override { return "H(" + base_.label() + ")"; }
  bool exact() const override { return base_.exact(); }
  bool isometric() const override { return base_.m().isometric(); }

  std::vector<Point> distinguished_points() const override {
    std::vector<Point> out = seeds_;
    for (const Point& p : base_.m().distinguished_points())
      out.push_back(make_point(SetPoint{{p}}));
    return out;
  }

  const System& base() const { return base_; }

 private:
  System base_;
  std::vector<Point> seeds_;
};

// ---------------------------------------------------------------------------
// Metric rescaling wrapper

class RescaleModel final : public SystemModel {
 public:
  RescaleModel(System base, double lambda, double cap)
      : base_(std::move(base)), lambda_(lambda), cap_(cap) {
    if (!(lambda > 0) || !(cap > 0))
      throw std::invalid_argument("rescale_metric: lambda and cap must be positive");
  }

  int dimension() const override { return base_.dimension(); }

  double metric(const Point& a, const Point& b) const override {
    return std::min(lambda_ * base_.metric(a, b), cap_);
  }

  Point act(const GroupElement& g, const Point& x) const override { return base_.act(g, x); }

  std::vector<Point> net_points(double mesh) const override {
    return base_.m().net_points(mesh / lambda_);
  }

  std::optional<std::vector<Point>> ball_points(const Point& x, double delta,
                                                double mesh) const override {
    if (delta >= cap_) return base_.m().net_points(mesh / lambda_);
    return base_.m().ball_points(x, delta / lambda_, mesh / lambda_);
  }

  double diameter_bound() const override { return std::min(lambda_ * base_.diameter_bound(), cap_); }
  std::string label() const override { return "rescale(" + base_.label() + ")"; }
  bool exact() const override { return base_.exact(); }
  bool isometric() const override { return base_.m().isometric(); }
  std::vector<Point> distinguished_points() const override {
    return base_.m().distinguished_points();
  }

 private:
  System base_;
  double lambda_;
  double cap_;
};

void validate_structure(const PeriodStructure& ps) {
  if (ps.periods.empty() || ps.fills.size() != ps.periods.size())
    throw std::invalid_argument("make_toeplitz: periods and fills must align");
  i64 prev = 1;
  for (i64 p : ps.periods) {
    if (p < 2 || p % prev != 0 || p == prev)
      throw std::invalid_argument("make_toeplitz: periods must be a strictly increasing divisibility chain");
    prev = p;
  }
  for (size_t k = 0; k < ps.fills.size(); ++k) {
    for (const auto& [r, sym] : ps.fills[k]) {
      if (r < 0 || r >= ps.periods[k])
        throw std::invalid_argument("make_toeplitz: fill residue out of range");
      if (sym > 1) throw std::invalid_argument("make_toeplitz: symbols must be binary");
      for (size_t k2 = 0; k2 < k; ++k2)
        if (ps.fills[k2].count(pos_mod(r, ps.periods[k2])))
          throw std::invalid_argument("make_toeplitz: fill residue already assigned at an earlier level");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public constructors

System make_rotation(Rat alpha) { return System(std::make_shared<RotationModel>(alpha)); }

System make_full_shift(int alphabet) {
  return System(std::make_shared<FullShiftModel>(alphabet));
}

std::pair<System, FactorMap> make_sturmian(Rat alpha) {
  auto model = std::make_shared<SturmianModel>(alpha);
  System source(model);
  System target = make_rotation(model->angle());
  FactorMap pi;
  pi.source = source;
  pi.target = target;
  pi.map = [](const Point& x) { return make_point(CirclePoint{x.as<SturmianPoint>().angle}); };
  pi.fiber_hint = [source](const Point& y, double mesh) -> std::optional<NetSet> {
    NetSet f;
    f.points = canonical_points({make_point(SturmianPoint{y.as<CirclePoint>().angle, false}),
                                 make_point(SturmianPoint{y.as<CirclePoint>().angle, true})});
    f.mesh = mesh;
    f.certified = true;
    f.model = source.model();
    return f;
  };
  pi.label = "sturmian->rotation";
  pi.banach_proximal = true;
  return {source, pi};
}

PeriodStructure doubling_structure(int odometer_depth) {
  if (odometer_depth < 2 || odometer_depth > 40)
    throw std::invalid_argument("doubling_structure: depth must lie in [2, 40]");
  PeriodStructure ps;
  ps.doubling_tail = true;
  ps.odometer_depth = odometer_depth;
  for (int k = 1; k <= odometer_depth; ++k) {
    ps.periods.push_back(i64(1) << k);
    ps.fills.push_back({{(i64(1) << (k - 1)) - 1, std::uint8_t(k % 2 == 1 ? 1 : 0)}});
  }
  return ps;
}

PeriodStructure quarter_hole_structure() {
  PeriodStructure ps;
  ps.periods = {2, 4};
  ps.fills = {{{0, 1}}, {{1, 0}}};
  ps.doubling_tail = false;
  ps.odometer_depth = 2;
  return ps;
}

double filled_density(const PeriodStructure& ps, int level) {
  double total = 0;
  for (int k = 1; k <= level; ++k) {
    if (k <= int(ps.periods.size()))
      total += double(ps.fills[size_t(k - 1)].size()) / double(ps.periods[size_t(k - 1)]);
    else if (ps.doubling_tail)
      total += std::ldexp(1.0, -k);
  }
  return total;
}

bool fully_filled(const PeriodStructure& ps) {
  if (ps.doubling_tail) return true;
  double covered = filled_density(ps, int(ps.periods.size()));
  return covered >= 1.0;
}

std::pair<System, FactorMap> make_toeplitz(const PeriodStructure& ps) {
  validate_structure(ps);
  if (ps.doubling_tail) {
    for (size_t k = 0; k < ps.periods.size(); ++k) {
      bool shaped = ps.periods[k] == (i64(1) << (k + 1)) && ps.fills[k].size() == 1 &&
                    ps.fills[k].begin()->first == (i64(1) << k) - 1;
      if (!shaped)
        throw std::invalid_argument(
            "make_toeplitz: doubling_tail requires the one-residue-per-doubling-level shape");
    }
    if (ps.periods.size() < 2)
      throw std::invalid_argument("make_toeplitz: doubling_tail needs at least two levels");
    std::uint8_t s_odd = ps.fills[0].begin()->second;
    std::uint8_t s_even = ps.fills[1].begin()->second;
    for (size_t k = 2; k < ps.fills.size(); ++k)
      if (ps.fills[k].begin()->second != (k % 2 == 0 ? s_odd : s_even))
        throw std::invalid_argument("make_toeplitz: doubling_tail symbols must alternate");
    int depth = ps.odometer_depth;
    if (depth < 2 || depth > 30)
      throw std::invalid_argument("make_toeplitz: odometer depth must lie in [2, 30]");
    auto model = std::make_shared<DoublingToeplitzModel>(s_odd, s_even);
    System source(model);
    std::vector<i64> periods;
    for (int k = 1; k <= depth; ++k) periods.push_back(i64(1) << k);
    System target = make_odometer(periods);
    i64 p_last = periods.back();
    FactorMap pi;
    pi.source = source;
    pi.target = target;
    pi.map = [p_last](const Point& x) {
      return make_point(OdometerPoint{pos_mod(x.as<ToeplitzPoint>().shift, p_last)});
    };
    pi.fiber_hint = [source, p_last](const Point& y, double mesh) -> std::optional<NetSet> {
      int w = window_radius(mesh);
      if (2 * i64(w) + 2 > p_last) return std::nullopt;
      i64 r = pos_mod(y.as<OdometerPoint>().value, p_last);
      NetSet f;
      for (i64 t = -2; t <= 2; ++t)
        for (int b = 0; b < 2; ++b)
          f.points.push_back(make_point(ToeplitzPoint{r + t * p_last, std::uint8_t(b)}));
      f.points = canonical_points(std::move(f.points));
      f.mesh = mesh;
      f.certified = true;
      f.model = source.model();
      return f;
    };
    pi.label = "toeplitz-doubling->odometer";
    pi.banach_proximal = true;
    return {source, pi};
  }

  auto model = std::make_shared<HoleToeplitzModel>(ps.periods, ps.fills);
  System source(model);
  System target = make_odometer(ps.periods);
  i64 p_last = ps.periods.back();
  auto raw = model.get();
  FactorMap pi;
  pi.source = source;
  pi.target = target;
  pi.map = [p_last](const Point& x) {
    return make_point(OdometerPoint{pos_mod(x.as<HoleWordPoint>().shift, p_last)});
  };
  pi.fiber_hint = [source, raw, p_last](const Point& y, double mesh) -> std::optional<NetSet> {
    int w = window_radius(mesh);
    i64 r = pos_mod(y.as<OdometerPoint>().value, p_last);
    std::vector<i64> hole_idx;
    for (i64 m = r - w; m <= r + w; ++m)
      if (raw->skeleton(m) < 0) hole_idx.push_back(raw->hole_index(m));
    size_t c = hole_idx.size();
    if (c > 16) return std::nullopt;
    i64 t_lo = hole_idx.empty() ? 0 : hole_idx.front();
    NetSet f;
    for (i64 mask = 0; mask < (i64(1) << c); ++mask) {
      std::vector<std::uint8_t> pattern(c);
      for (size_t i = 0; i < c; ++i) pattern[i] = std::uint8_t((mask >> i) & 1);
      f.points.push_back(make_point(HoleWordPoint{r, window_word(pattern, t_lo, 2)}));
    }
    f.points = canonical_points(std::move(f.points));
    f.mesh = mesh;
    f.certified = true;
    f.model = source.model();
    return f;
  };
  pi.label = "toeplitz-holes->odometer";
  pi.banach_proximal = fully_filled(ps);
  return {source, pi};
}

System make_odometer(std::vector<i64> periods) {
  return System(std::make_shared<OdometerModel>(std::move(periods)));
}

System make_two_point_compactification() { return System(std::make_shared<TwoPointModel>()); }

System make_one_point_compactification() { return System(std::make_shared<OnePointModel>()); }

std::pair<System, FactorMap> make_double_compactification() {
  System source(std::make_shared<GluedModel>());
  System target = make_one_point_compactification();
  FactorMap pi;
  pi.source = source;
  pi.target = target;
  pi.map = [](const Point& x) {
    const auto& p = x.as<GluedPoint>();
    if (p.kind == GluedPoint::inf) return make_point(OnePointPoint{true, 0});
    return make_point(OnePointPoint{false, p.n});
  };
  pi.fiber_hint = [source](const Point& y, double mesh) -> std::optional<NetSet> {
    const auto& p = y.as<OnePointPoint>();
    NetSet f;
    if (p.inf) {
      f.points = {make_point(GluedPoint{GluedPoint::inf, 0})};
    } else {
      f.points = canonical_points({make_point(GluedPoint{GluedPoint::hat, p.m}),
                                   make_point(GluedPoint{GluedPoint::check, p.m})});
    }
    f.mesh = mesh;
    f.certified = true;
    f.model = source.model();
    return f;
  };
  pi.label = "glued->one-point";
  pi.banach_proximal = true;
  return {source, pi};
}

System make_product(std::vector<System> factors, ProductMetric mode) {
  return System(std::make_shared<ProductModel>(std::move(factors), mode));
}

System make_trivial() { return System(std::make_shared<TrivialModel>(1)); }

FactorMap collapse_factor(const System& source) {
  System target(std::make_shared<TrivialModel>(source.dimension()));
  FactorMap pi;
  pi.source = source;
  pi.target = target;
  pi.map = [](const Point&) { return make_point(OdometerPoint{0}); };
  pi.fiber_hint = [source](const Point&, double mesh) -> std::optional<NetSet> {
    return source.net(mesh);
  };
  pi.label = "collapse(" + source.label() + ")";
  pi.banach_proximal = false;
  return pi;
}

System hyper_system(const System& base, std::vector<NetSet> seeds) {
  std::vector<Point> seed_points;
  for (const NetSet& ns : seeds) {
    if (ns.model.get() != base.model().get())
      throw std::invalid_argument("hyper_system: seed set belongs to a different system");
    if (ns.points.empty()) throw std::invalid_argument("hyper_system: empty seed set");
    seed_points.push_back(make_point(SetPoint{canonical_points(ns.points)}));
  }
  return System(std::make_shared<HyperModel>(base, std::move(seed_points)));
}

System rescale_metric(const System& base, double lambda, double cap) {
  return System(std::make_shared<RescaleModel>(base, lambda, cap));
}

FactorMap identity_factor(const System& sys) {
  FactorMap pi;
  pi.source = sys;
  pi.target = sys;
  pi.map = [](const Point& x) { return x; };
  pi.fiber_hint = [sys](const Point& y, double mesh) -> std::optional<NetSet> {
    NetSet f;
    f.points = {y};
    f.mesh = mesh;
    f.certified = true;
    f.model = sys.model();
    return f;
  };
  pi.label = "id(" + sys.label() + ")";
  pi.banach_proximal = true;
  return pi;
}

}  // namespace meandiam
