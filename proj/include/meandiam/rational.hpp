#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace meandiam {

/// Exact rational with 64-bit storage. Denominator is positive and the
/// fraction fully reduced; intermediates widen to 128 bits and overflow of
/// the reduced result throws instead of wrapping.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rat() = default;
  Rat(std::int64_t n, std::int64_t d) { assign(n, d); }
  static Rat of(std::int64_t n) { return Rat(n, 1); }

  double to_double() const { return double(num) / double(den); }
  bool is_zero() const { return num == 0; }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from128(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from128(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from128(i128(a.num) * b.num, i128(a.den) * b.den);
  }
  Rat operator-() const {
    Rat r;
    r.num = -num;
    r.den = den;
    return r;
  }
  friend Rat operator*(std::int64_t k, const Rat& a) { return from128(i128(k) * a.num, i128(a.den)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Rat& a, const Rat& b) { return i128(a.num) * b.den < i128(b.num) * a.den; }
  friend bool operator<=(const Rat& a, const Rat& b) { return i128(a.num) * b.den <= i128(b.num) * a.den; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

  /// Representative in [0, 1).
  Rat mod1() const {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    Rat out;
    out.num = r;
    out.den = den;
    // num/den was reduced, so r/den needs no further reduction unless r == 0.
    if (r == 0) out.den = 1;
    return out;
  }

  Rat abs() const {
    Rat r = *this;
    if (r.num < 0) r.num = -r.num;
    return r;
  }

 private:
  using i128 = __int128;

  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num = n;
    den = d;
  }

  static Rat from128(i128 n, i128 d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 an = n < 0 ? -n : n;
    i128 g = gcd128(an, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) throw std::overflow_error("Rat: overflow");
    Rat r;
    r.num = std::int64_t(n);
    r.den = std::int64_t(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
};

/// Shortest-path distance on the unit circle R/Z, exact until the final
/// double conversion.
inline double circle_distance(const Rat& x, const Rat& y) {
  Rat c = (x - y).mod1();
  Rat d = (Rat::of(1) - c).mod1();
  return (c < d ? c : d).to_double();
}

}  // namespace meandiam
