#include "meandiam/svg.hpp"

#include <algorithm>
#include <cmath>

#include "meandiam/csv.hpp"

namespace meandiam {

namespace {

constexpr double kW = 640, kH = 400;
constexpr double kL = 70, kR = 20, kT = 40, kB = 50;  // margins

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                     bool dashed) {
  std::string s = "  <polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"";
  if (dashed) s += " stroke-dasharray=\"6,4\"";
  s += " points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += fmt_double(pts[i].first) + "," + fmt_double(pts[i].second);
  }
  s += "\"/>\n";
  return s;
}

std::string text(double x, double y, const std::string& body, const std::string& anchor,
                 int size = 12) {
  return "  <text x=\"" + fmt_double(x) + "\" y=\"" + fmt_double(y) + "\" font-family=\"monospace\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + xml_escape(body) +
         "</text>\n";
}

}  // namespace

std::string estimate_svg(const Estimate& est) {
  const auto& tail = est.tail;
  double lo = 0, hi = 1;
  if (!tail.empty()) {
    lo = tail.front().value;
    hi = tail.front().value;
    for (const TailEntry& t : tail) {
      lo = std::min({lo, t.value, t.sup_translate});
      hi = std::max({hi, t.value, t.sup_translate});
    }
  }
  if (hi - lo < 1e-12) {
    hi += 0.5;
    lo -= 0.5;
  }
  double pad = 0.06 * (hi - lo);
  lo -= pad;
  hi += pad;

  const size_t m = tail.size();
  auto px = [&](size_t i) {
    return m <= 1 ? (kL + (kW - kL - kR) / 2)
                  : kL + (kW - kL - kR) * double(i) / double(m - 1);
  };
  auto py = [&](double v) { return kH - kB - (kH - kT - kB) * (v - lo) / (hi - lo); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_double(kW) + "\" height=\"" +
       fmt_double(kH) + "\" viewBox=\"0 0 " + fmt_double(kW) + " " + fmt_double(kH) + "\">\n";
  s += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  s += "  <line x1=\"" + fmt_double(kL) + "\" y1=\"" + fmt_double(kT) + "\" x2=\"" +
       fmt_double(kL) + "\" y2=\"" + fmt_double(kH - kB) + "\" stroke=\"black\"/>\n";
  s += "  <line x1=\"" + fmt_double(kL) + "\" y1=\"" + fmt_double(kH - kB) + "\" x2=\"" +
       fmt_double(kW - kR) + "\" y2=\"" + fmt_double(kH - kB) + "\" stroke=\"black\"/>\n";

  std::string title = est.label;
  if (title.size() > 78) title = title.substr(0, 75) + "...";
  s += text(kW / 2, kT - 16, title, "middle", 13);
  s += text(kL - 8, py(est.value) + 4, fmt_double(est.value), "end", 11);
  s += text(kL - 8, kT + 8, fmt_double(hi), "end", 10);
  s += text(kL - 8, kH - kB, fmt_double(lo), "end", 10);
  s += text(kW / 2, kH - 14,
            "window index n (" + (tail.empty() ? std::string("empty") :
             std::to_string(tail.front().n) + ".." + std::to_string(tail.back().n)) + ")",
            "middle", 11);
  s += text(kW - kR, kT - 4,
            std::string(est.mode == Mode::banach_sup ? "banach" : "along") +
                (est.stabilized ? " stabilized" : " not-stabilized"),
            "end", 11);

  std::vector<std::pair<double, double>> val_pts, sup_pts;
  for (size_t i = 0; i < m; ++i) {
    val_pts.push_back({px(i), py(tail[i].value)});
    sup_pts.push_back({px(i), py(tail[i].sup_translate)});
  }
  if (!sup_pts.empty()) s += polyline(sup_pts, "#b03030", true);
  if (!val_pts.empty()) s += polyline(val_pts, "#3060b0", false);
  // final-value marker
  if (!val_pts.empty()) {
    s += "  <circle cx=\"" + fmt_double(sup_pts.back().first) + "\" cy=\"" +
         fmt_double(sup_pts.back().second) + "\" r=\"3\" fill=\"#b03030\"/>\n";
  }
  s += text(kL + 6, kT + 12, "solid: window average", "start", 10);
  s += text(kL + 6, kT + 26, "dashed: sup over translates", "start", 10);
  s += "</svg>\n";
  return s;
}

std::string fs_safe(const std::string& label) {
  std::string out;
  bool last_dash = false;
  for (char c : label) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '.' || c == '_' || c == '-';
    if (ok) {
      out += c;
      last_dash = false;
    } else if (!last_dash) {
      out += '-';
      last_dash = true;
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? std::string("x") : out;
}

std::string plot_filename(const std::string& check, const std::string& system, int n) {
  return fs_safe(check) + "_" + fs_safe(system) + "_" + std::to_string(n) + ".svg";
}

}  // namespace meandiam
