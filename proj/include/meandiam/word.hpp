#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace meandiam {

/// Bi-infinite word over a small alphabet, stored as (left period, core,
/// right period). The left pattern tiles (-inf, core_start) so that its last
/// symbol sits at core_start - 1; the right pattern tiles [core_end, +inf)
/// starting at core_end. Shifting is exact and O(1).
struct EpWord {
  std::vector<std::uint8_t> left;   // nonempty
  std::vector<std::uint8_t> core;   // may be empty
  std::vector<std::uint8_t> right;  // nonempty
  std::int64_t core_start = 0;

  std::int64_t core_end() const { return core_start + std::int64_t(core.size()); }

  std::uint8_t symbol(std::int64_t n) const {
    if (n >= core_start && n < core_end()) return core[size_t(n - core_start)];
    if (n < core_start) {
      std::int64_t m = n - core_start;
      std::int64_t L = std::int64_t(left.size());
      std::int64_t idx = m % L;
      if (idx < 0) idx += L;
      return left[size_t(idx)];
    }
    std::int64_t m = n - core_end();
    return right[size_t(m % std::int64_t(right.size()))];
  }

  /// The word with symbol(n) = old symbol(n + g): shift the frame, keep data.
  EpWord shifted(std::int64_t g) const {
    EpWord w = *this;
    w.core_start -= g;
    return w;
  }

  friend bool operator==(const EpWord& a, const EpWord& b) {
    return a.core_start == b.core_start && a.left == b.left && a.core == b.core &&
           a.right == b.right;
  }
  friend bool operator<(const EpWord& a, const EpWord& b) {
    if (a.core_start != b.core_start) return a.core_start < b.core_start;
    if (a.core != b.core) return a.core < b.core;
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  }

  std::string str() const {
    std::string s = "[";
    for (auto x : left) s += char('0' + x);
    s += "]^inf ";
    for (auto x : core) s += char('0' + x);
    s += " [";
    for (auto x : right) s += char('0' + x);
    s += "]^inf @" + std::to_string(core_start);
    return s;
  }
};

/// Constant word.
inline EpWord constant_word(std::uint8_t sym) {
  return EpWord{{sym}, {}, {sym}, 0};
}

/// Window [lo, lo+len) of symbols with alternating tails on both sides:
/// beyond the window the symbols step +1 mod alphabet from the edge symbol,
/// so words with distinct edge symbols disagree at every far position.
inline EpWord window_word(const std::vector<std::uint8_t>& window, std::int64_t lo, int alphabet) {
  if (window.empty()) return constant_word(0);
  int k = alphabet < 2 ? 2 : alphabet;
  EpWord w;
  w.core = window;
  w.core_start = lo;
  std::uint8_t a = window.front();
  std::uint8_t b = window.back();
  w.left.resize(size_t(k));
  for (int j = 0; j < k; ++j) w.left[size_t(k - 1 - j)] = std::uint8_t((a + 1 + j) % k);
  w.right.resize(size_t(k));
  for (int j = 0; j < k; ++j) w.right[size_t(j)] = std::uint8_t((b + 1 + j) % k);
  return w;
}

}  // namespace meandiam
