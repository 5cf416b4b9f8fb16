#include "meandiam/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "meandiam/csv.hpp"
#include "meandiam/systems.hpp"

namespace meandiam {

namespace {

using nlohmann::json;

std::string kind_name(const json& j) {
  switch (j.type()) {
    case json::value_t::object: return "object";
    case json::value_t::array: return "array";
    case json::value_t::string: return "string";
    case json::value_t::boolean: return "bool";
    case json::value_t::null: return "null";
    default: return "number";
  }
}

/// Diagnostic context: keeps the raw text so semantic errors can point at the
/// first line mentioning the offending key.
struct Ctx {
  const std::string* text = nullptr;

  int line_of_key(const std::string& key) const {
    size_t pos = text->find("\"" + key + "\"");
    if (pos == std::string::npos) return 1;
    return 1 + int(std::count(text->begin(), text->begin() + long(pos), '\n'));
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError("\"" + key + "\": " + msg, line_of_key(key));
  }

  const json& require(const json& j, const std::string& key) const {
    auto it = j.find(key);
    if (it == j.end()) fail(key, "required field is missing");
    return *it;
  }

  double get_num(const json& j, const std::string& key) const {
    const json& v = require(j, key);
    if (!v.is_number()) fail(key, "expected a number, got " + kind_name(v));
    return v.get<double>();
  }
  double num_or(const json& j, const std::string& key, double def) const {
    return j.contains(key) ? get_num(j, key) : def;
  }

  i64 get_int(const json& j, const std::string& key) const {
    const json& v = require(j, key);
    if (!v.is_number_integer()) fail(key, "expected an integer, got " + kind_name(v));
    return v.get<i64>();
  }
  i64 int_or(const json& j, const std::string& key, i64 def) const {
    return j.contains(key) ? get_int(j, key) : def;
  }

  bool bool_or(const json& j, const std::string& key, bool def) const {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_boolean()) fail(key, "expected true/false, got " + kind_name(v));
    return v.get<bool>();
  }

  std::string get_str(const json& j, const std::string& key) const {
    const json& v = require(j, key);
    if (!v.is_string()) fail(key, "expected a string, got " + kind_name(v));
    return v.get<std::string>();
  }
  std::string str_or(const json& j, const std::string& key, const std::string& def) const {
    return j.contains(key) ? get_str(j, key) : def;
  }

  const json& get_obj(const json& j, const std::string& key) const {
    const json& v = require(j, key);
    if (!v.is_object()) fail(key, "expected an object, got " + kind_name(v));
    return v;
  }

  const json& get_arr(const json& j, const std::string& key) const {
    const json& v = require(j, key);
    if (!v.is_array()) fail(key, "expected an array, got " + kind_name(v));
    return v;
  }

  /// Rational as [num, den], or via the "<key>_num"/"<key>_den" field pair.
  Rat get_rat(const json& j, const std::string& key) const {
    if (j.contains(key)) {
      const json& v = j.at(key);
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
          !v[1].is_number_integer())
        fail(key, "expected [numerator, denominator]");
      return Rat(v[0].get<i64>(), v[1].get<i64>());
    }
    if (j.contains(key + "_num") && j.contains(key + "_den"))
      return Rat(get_int(j, key + "_num"), get_int(j, key + "_den"));
    fail(key, "required rational is missing (give [num, den] or " + key + "_num/" + key +
                  "_den)");
  }

  /// Scale value: a plain number or a string "2^-K".
  double get_scale(const json& v, const std::string& key) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s.rfind("2^", 0) == 0) {
        char* end = nullptr;
        long e = std::strtol(s.c_str() + 2, &end, 10);
        if (end && *end == '\0') return std::ldexp(1.0, int(e));
      }
      fail(key, "bad scale string \"" + s + "\" (use a number or \"2^-K\")");
    }
    fail(key, "expected a number or \"2^-K\" string, got " + kind_name(v));
  }

  std::vector<double> scale_list(const json& j, const std::string& key) const {
    const json& a = get_arr(j, key);
    std::vector<double> out;
    for (const json& v : a) out.push_back(get_scale(v, key));
    for (double d : out)
      if (!(d > 0)) fail(key, "entries must be positive");
    for (size_t i = 1; i < out.size(); ++i)
      if (out[i] >= out[i - 1]) fail(key, "entries must be strictly decreasing");
    return out;
  }
};

EstimatorParams build_estimator(const Ctx& c, const json& j, EstimatorParams base) {
  EstimatorParams p = base;
  p.n_min = c.int_or(j, "n_min", p.n_min);
  p.n_max = c.int_or(j, "n_max", p.n_max);
  p.grid_ratio = c.num_or(j, "grid_ratio", p.grid_ratio);
  p.tail_frac = c.num_or(j, "tail_frac", p.tail_frac);
  p.radius = c.int_or(j, "radius", p.radius);
  p.tol_abs = c.num_or(j, "tol_abs", p.tol_abs);
  p.stab_rel = c.num_or(j, "stab_rel", p.stab_rel);
  p.threads = int(c.int_or(j, "threads", p.threads));
  if (p.n_min < 1) c.fail("n_min", "must be >= 1");
  if (p.n_max < p.n_min) c.fail("n_max", "must be >= n_min");
  if (!(p.grid_ratio > 1.0)) c.fail("grid_ratio", "must be > 1");
  if (!(p.tail_frac > 0 && p.tail_frac <= 1)) c.fail("tail_frac", "must be in (0, 1]");
  if (p.radius < 0) c.fail("radius", "must be >= 0 (0 means n_max)");
  if (p.threads < 1) c.fail("threads", "must be >= 1");
  return p;
}

System build_system(const Ctx& c, const json& j);

PeriodStructure build_structure(const Ctx& c, const json& j) {
  if (j.contains("structure")) {
    const std::string s = c.get_str(j, "structure");
    if (s == "doubling") return doubling_structure(int(c.int_or(j, "odometer_depth", 12)));
    if (s == "quarter_hole") return quarter_hole_structure();
    c.fail("structure", "unknown structure \"" + s + "\" (doubling, quarter_hole)");
  }
  PeriodStructure ps;
  for (const json& v : c.get_arr(j, "periods")) {
    if (!v.is_number_integer()) c.fail("periods", "expected integers");
    ps.periods.push_back(v.get<i64>());
  }
  for (const json& level : c.get_arr(j, "fills")) {
    if (!level.is_object()) c.fail("fills", "expected one {\"residue\": symbol} object per level");
    std::map<i64, std::uint8_t> m;
    for (auto it = level.begin(); it != level.end(); ++it) {
      char* end = nullptr;
      long long r = std::strtoll(it.key().c_str(), &end, 10);
      if (!end || *end != '\0') c.fail("fills", "residue keys must be integers");
      if (!it.value().is_number_integer()) c.fail("fills", "symbols must be integers");
      m[i64(r)] = std::uint8_t(it.value().get<i64>());
    }
    ps.fills.push_back(std::move(m));
  }
  ps.doubling_tail = c.bool_or(j, "doubling_tail", false);
  ps.odometer_depth = int(c.int_or(j, "odometer_depth", 12));
  return ps;
}

System build_system(const Ctx& c, const json& j) {
  if (!j.is_object()) c.fail("system", "expected an object with a \"name\"");
  const std::string name = c.get_str(j, "name");
  if (name == "rotation") return make_rotation(c.get_rat(j, "alpha"));
  if (name == "full_shift") return make_full_shift(int(c.int_or(j, "alphabet", 2)));
  if (name == "sturmian") return make_sturmian(c.get_rat(j, "alpha")).first;
  if (name == "toeplitz") return make_toeplitz(build_structure(c, j)).first;
  if (name == "odometer") {
    std::vector<i64> periods;
    for (const json& v : c.get_arr(j, "periods")) {
      if (!v.is_number_integer()) c.fail("periods", "expected integers");
      periods.push_back(v.get<i64>());
    }
    return make_odometer(std::move(periods));
  }
  if (name == "two_point_compactification") return make_two_point_compactification();
  if (name == "one_point_compactification") return make_one_point_compactification();
  if (name == "glued_compactification") return make_double_compactification().first;
  if (name == "trivial") return make_trivial();
  if (name == "product") {
    std::vector<System> factors;
    for (const json& f : c.get_arr(j, "factors")) factors.push_back(build_system(c, f));
    ProductMetric pm = ProductMetric::sup;
    const std::string mode = c.str_or(j, "metric", "sup");
    if (mode == "weighted") pm = ProductMetric::weighted;
    else if (mode != "sup") c.fail("metric", "unknown product metric \"" + mode + "\"");
    return make_product(std::move(factors), pm);
  }
  c.fail("name", "unknown system \"" + name +
                     "\" (rotation, full_shift, sturmian, toeplitz, odometer, "
                     "two_point_compactification, one_point_compactification, "
                     "glued_compactification, product, trivial)");
}

FactorMap build_factor(const Ctx& c, const json& j) {
  if (!j.is_object()) c.fail("factor", "expected an object with a \"name\"");
  const std::string name = c.get_str(j, "name");
  if (name == "identity") return identity_factor(build_system(c, c.get_obj(j, "system")));
  if (name == "sturmian_to_rotation") return make_sturmian(c.get_rat(j, "alpha")).second;
  if (name == "toeplitz_to_odometer") return make_toeplitz(build_structure(c, j)).second;
  if (name == "collapse") return collapse_factor(build_system(c, c.get_obj(j, "system")));
  if (name == "glued_projection") return make_double_compactification().second;
  if (name == "product") {
    std::vector<FactorMap> parts;
    for (const json& f : c.get_arr(j, "factors")) parts.push_back(build_factor(c, f));
    ProductMetric pm = ProductMetric::sup;
    if (c.str_or(j, "metric", "sup") == "weighted") pm = ProductMetric::weighted;
    return product_factor(std::move(parts), pm);
  }
  if (name == "compose")
    return compose_factor(build_factor(c, c.get_obj(j, "outer")),
                          build_factor(c, c.get_obj(j, "inner")));
  c.fail("name", "unknown factor \"" + name +
                     "\" (identity, sturmian_to_rotation, toeplitz_to_odometer, collapse, "
                     "glued_projection, product, compose)");
}

FolnerSequence build_folner(const Ctx& c, const json& j, int dim) {
  const std::string style_s = c.str_or(j, "style", "forward");
  FolnerStyle style;
  try {
    style = folner_style_from_string(style_s);
  } catch (const std::exception& e) {
    c.fail("style", e.what());
  }
  std::function<GroupElement(i64)> schedule;
  if (style == FolnerStyle::translated) {
    std::vector<i64> coef;
    for (const json& v : c.get_arr(j, "coef")) {
      if (!v.is_number_integer()) c.fail("coef", "expected integers");
      coef.push_back(v.get<i64>());
    }
    if (int(coef.size()) != dim) c.fail("coef", "needs one coefficient per dimension");
    schedule = [coef](i64 n) {
      std::vector<i64> g(coef.size());
      for (size_t i = 0; i < coef.size(); ++i) g[i] = coef[i] * n;
      return GroupElement{g};
    };
  }
  FolnerSequence F = standard_folner(dim, style, std::move(schedule));
  if (j.contains("label")) F.label = c.get_str(j, "label");
  return F;
}

Point build_point(const Ctx& c, const json& j, const System& sys) {
  if (!j.is_object()) c.fail("point", "expected an object with a \"kind\"");
  const std::string kind = c.get_str(j, "kind");
  if (kind == "distinguished") {
    auto pts = sys.m().distinguished_points();
    i64 idx = c.int_or(j, "index", 0);
    if (pts.empty()) c.fail("kind", "system has no distinguished points");
    if (idx < 0 || size_t(idx) >= pts.size())
      c.fail("index", "out of range (have " + std::to_string(pts.size()) + ")");
    return pts[size_t(idx)];
  }
  if (kind == "net") {
    double mesh = c.num_or(j, "mesh", 0.05);
    auto pts = sys.net(mesh).points;
    i64 idx = c.int_or(j, "index", 0);
    if (idx < 0 || size_t(idx) >= pts.size())
      c.fail("index", "out of range (net has " + std::to_string(pts.size()) + ")");
    return pts[size_t(idx)];
  }
  if (kind == "circle") return make_point(CirclePoint{c.get_rat(j, "angle").mod1()});
  if (kind == "infinity") {
    i64 sign = c.int_or(j, "sign", 1);
    for (const Point& p : sys.m().distinguished_points()) {
      if (p.is<CompactPoint>()) {
        auto k = p.as<CompactPoint>().kind;
        if (sign >= 0 && k == CompactPoint::pos_inf) return p;
        if (sign < 0 && k == CompactPoint::neg_inf) return p;
      }
      if (p.is<GluedPoint>() && p.as<GluedPoint>().kind == GluedPoint::inf) return p;
      if (p.is<OnePointPoint>() && p.as<OnePointPoint>().inf) return p;
    }
    c.fail("kind", "system has no distinguished point at infinity");
  }
  c.fail("kind", "unknown point kind \"" + kind +
                     "\" (distinguished, net, circle, infinity)");
}

DiamTask build_set(const Ctx& c, const json& j, const System& sys) {
  if (!j.is_object()) c.fail("sets", "expected objects with a \"kind\"");
  const std::string kind = c.get_str(j, "kind");
  if (kind == "arc") {
    Rat lo = c.get_rat(j, "lo");
    Rat hi = c.get_rat(j, "hi");
    double mesh = c.num_or(j, "mesh", 0.002);
    if (!(mesh > 0)) c.fail("mesh", "must be positive");
    if (!(lo < hi)) c.fail("lo", "arc needs lo < hi");
    Rat span = hi - lo;
    if (Rat(1, 2) < span) c.fail("hi", "arc longer than half the circle");
    i64 steps = i64(std::ceil(span.to_double() / mesh));
    if (steps < 1) steps = 1;
    Rat step = span * Rat(1, steps);
    NetSet set;
    // Probe the payload so a misdirected arc fails at load, not mid-run.
    if (sys.net(0.55).points.front().is<CirclePoint>() == false)
      c.fail("kind", "arc sets need a rotation system");
    for (i64 k = 0; k <= steps; ++k)
      set.points.push_back(make_point(CirclePoint{(lo + Rat::of(k) * step).mod1()}));
    set.points = canonical_points(std::move(set.points));
    set.mesh = step.to_double();
    set.certified = true;
    set.model = sys.model();
    return {std::move(set), "arc[" + lo.str() + "," + hi.str() + "]"};
  }
  if (kind == "ball") {
    Point x = build_point(c, c.get_obj(j, "point"), sys);
    double delta = c.get_scale(c.require(j, "delta"), "delta");
    if (!(delta > 0)) c.fail("delta", "must be positive");
    NetSet set = ball_net(sys, x, delta, sys.ball_resolution(delta));
    return {std::move(set), "ball(" + x.str() + ";" + fmt_double(delta) + ")"};
  }
  if (kind == "net") {
    double mesh = c.num_or(j, "mesh", 0.05);
    if (!(mesh > 0)) c.fail("mesh", "must be positive");
    return {sys.net(mesh), "net(" + fmt_double(mesh) + ")"};
  }
  if (kind == "pair") {
    Point a = build_point(c, c.get_obj(j, "a"), sys);
    Point b = build_point(c, c.get_obj(j, "b"), sys);
    NetSet set;
    set.points = canonical_points({a, b});
    set.mesh = 0;
    set.certified = true;
    set.model = sys.model();
    return {std::move(set), "pair(" + a.str() + ";" + b.str() + ")"};
  }
  c.fail("kind", "unknown set kind \"" + kind + "\" (arc, ball, net, pair)");
}

DensityTask build_density(const Ctx& c, const json& j, int dim) {
  if (!j.is_object()) c.fail("density_sets", "expected objects with a \"kind\"");
  const std::string kind = c.str_or(j, "kind", "progression");
  if (kind == "progression") {
    i64 a = c.get_int(j, "a");
    i64 b = c.get_int(j, "b");
    i64 coord = c.int_or(j, "coordinate", 0);
    if (a < 1) c.fail("a", "modulus must be >= 1");
    if (coord < 0 || coord >= dim) c.fail("coordinate", "out of range");
    GroupPredicate pred = [a, b, coord](const GroupElement& g) {
      i64 r = g.c[size_t(coord)] % a;
      if (r < 0) r += a;
      return r == ((b % a) + a) % a;
    };
    return {std::move(pred),
            std::to_string(a) + "Z+" + std::to_string(b) +
                (coord ? "@c" + std::to_string(coord) : "")};
  }
  c.fail("kind", "unknown density set kind \"" + kind + "\" (progression)");
}

DmeParams build_dme(const Ctx& c, const json& j, DmeParams base) {
  DmeParams p = std::move(base);
  if (j.contains("estimator")) p.estimator = build_estimator(c, j.at("estimator"), p.estimator);
  if (j.contains("eps_schedule")) p.eps_schedule = c.scale_list(j, "eps_schedule");
  if (j.contains("delta_grid")) p.delta_grid = c.scale_list(j, "delta_grid");
  p.mesh = c.num_or(j, "mesh", p.mesh);
  p.sample_points = int(c.int_or(j, "sample_points", p.sample_points));
  p.pair_cap = int(c.int_or(j, "pair_cap", p.pair_cap));
  p.seed = unsigned(c.int_or(j, "seed", i64(p.seed)));
  if (!(p.mesh > 0)) c.fail("mesh", "must be positive");
  if (p.sample_points < 1) c.fail("sample_points", "must be >= 1");
  if (p.pair_cap < 1) c.fail("pair_cap", "must be >= 1");
  return p;
}

RegularityParams build_regularity(const Ctx& c, const json& j, RegularityParams base) {
  RegularityParams p = std::move(base);
  if (j.contains("estimator")) p.estimator = build_estimator(c, j.at("estimator"), p.estimator);
  if (j.contains("eps_schedule")) p.eps_schedule = c.scale_list(j, "eps_schedule");
  p.fiber_mesh = c.num_or(j, "fiber_mesh", p.fiber_mesh);
  p.fiber_samples = int(c.int_or(j, "fiber_samples", p.fiber_samples));
  p.crosscheck_samples = int(c.int_or(j, "crosscheck_samples", p.crosscheck_samples));
  p.seed = unsigned(c.int_or(j, "seed", i64(p.seed)));
  if (!(p.fiber_mesh > 0)) c.fail("fiber_mesh", "must be positive");
  if (p.fiber_samples < 1) c.fail("fiber_samples", "must be >= 1");
  if (p.crosscheck_samples < 0) c.fail("crosscheck_samples", "must be >= 0");
  return p;
}

SuiteParams build_suite_params(const Ctx& c, const json& j, SuiteParams base) {
  SuiteParams p = std::move(base);
  if (j.contains("dme")) p.dme = build_dme(c, j.at("dme"), p.dme);
  if (j.contains("regularity"))
    p.regularity = build_regularity(c, j.at("regularity"), p.regularity);
  if (j.contains("delta_schedule")) p.delta_schedule = c.scale_list(j, "delta_schedule");
  p.fiber_count = int(c.int_or(j, "fiber_count", p.fiber_count));
  p.product_check = c.bool_or(j, "product_check", p.product_check);
  if (p.fiber_count < 1) c.fail("fiber_count", "must be >= 1");
  return p;
}

}  // namespace

std::string to_string(DmeVariant v) {
  switch (v) {
    case DmeVariant::point: return "point";
    case DmeVariant::global: return "global";
    case DmeVariant::mean_eq: return "mean_eq";
  }
  return "?";
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1 + int(std::count(text.begin(),
                                  text.begin() + long(std::min(text.size(), size_t(e.byte))),
                                  '\n'));
    throw ConfigError(source_name + ": " + e.what(), line);
  }
  Ctx c{&text};
  if (!root.is_object()) throw ConfigError(source_name + ": top level must be an object", 1);

  ExperimentConfig cfg;
  cfg.command = c.str_or(root, "command", "");
  cfg.out_dir = c.str_or(root, "out_dir", "out");
  cfg.seed = unsigned(c.int_or(root, "seed", 2026));
  cfg.threads = int(c.int_or(root, "threads", 1));
  cfg.verbose = c.bool_or(root, "verbose", false);
  if (cfg.threads < 1) c.fail("threads", "must be >= 1");

  const std::string mode_s = c.str_or(root, "mode", "banach");
  if (mode_s == "banach") cfg.mode = Mode::banach_sup;
  else if (mode_s == "along") cfg.mode = Mode::along_folner;
  else c.fail("mode", "unknown mode \"" + mode_s + "\" (banach, along)");

  cfg.estimator = build_estimator(c, root.contains("estimator") ? root.at("estimator") : json::object(),
                                  EstimatorParams{});
  if (cfg.threads > 1 && !(root.contains("estimator") && root.at("estimator").contains("threads")))
    cfg.estimator.threads = cfg.threads;

  if (root.contains("system")) cfg.system = build_system(c, root.at("system"));

  // dme block (also resolves the probe point against the system).
  cfg.dme.estimator = cfg.estimator;
  cfg.dme.seed = cfg.seed;
  if (root.contains("dme")) {
    const json& dj = root.at("dme");
    const std::string variant = c.str_or(dj, "variant", "global");
    if (variant == "point") cfg.dme_variant = DmeVariant::point;
    else if (variant == "global") cfg.dme_variant = DmeVariant::global;
    else if (variant == "mean_eq") cfg.dme_variant = DmeVariant::mean_eq;
    else c.fail("variant", "unknown dme variant \"" + variant + "\" (point, global, mean_eq)");
    cfg.dme = build_dme(c, dj, cfg.dme);
    if (dj.contains("point")) {
      if (!cfg.system.valid()) c.fail("point", "needs a \"system\" to resolve against");
      cfg.dme_point = build_point(c, c.get_obj(dj, "point"), cfg.system);
    }
  }
  if (cfg.dme_variant == DmeVariant::mean_eq && cfg.mode == Mode::along_folner)
    c.fail("variant", "mean_eq runs the translate-sup (banach) pseudometric only");

  cfg.regularity.estimator = cfg.estimator;
  cfg.regularity.seed = cfg.seed;
  if (root.contains("regularity"))
    cfg.regularity = build_regularity(c, root.at("regularity"), cfg.regularity);
  if (root.contains("factor")) cfg.factor = build_factor(c, root.at("factor"));

  if (root.contains("sets")) {
    if (!cfg.system.valid()) c.fail("sets", "needs a \"system\"");
    for (const json& s : c.get_arr(root, "sets")) cfg.diam_tasks.push_back(build_set(c, s, cfg.system));
  }

  if (root.contains("suite")) {
    const json& sj = c.get_obj(root, "suite");
    json def_json = sj.contains("defaults") ? sj.at("defaults") : json::object();
    for (const json& pj : c.get_arr(sj, "pairs")) {
      if (!pj.is_object()) c.fail("pairs", "expected objects");
      SuitePair pair;
      pair.pi = build_factor(c, c.get_obj(pj, "factor"));
      // Field-wise override of the suite defaults (arrays replace wholesale).
      json merged = def_json;
      json overrides = pj;
      overrides.erase("factor");
      overrides.erase("label");
      merged.merge_patch(overrides);
      SuiteParams fresh;
      fresh.dme.estimator = cfg.estimator;
      fresh.dme.seed = cfg.seed;
      fresh.regularity.estimator = cfg.estimator;
      fresh.regularity.seed = cfg.seed;
      pair.params = build_suite_params(c, merged, std::move(fresh));
      pair.label = c.str_or(pj, "label", pair.pi.label);
      cfg.suite_pairs.push_back(std::move(pair));
    }
  }

  // Folner families and density predicates need the acting dimension; take
  // it from whichever object the command will run on.
  int dim = 1;
  if (cfg.system.valid()) dim = cfg.system.dimension();
  else if (cfg.factor.source.valid()) dim = cfg.factor.source.dimension();
  else if (!cfg.suite_pairs.empty()) dim = cfg.suite_pairs.front().pi.source.dimension();

  if (root.contains("density_sets"))
    for (const json& s : c.get_arr(root, "density_sets"))
      cfg.density_tasks.push_back(build_density(c, s, dim));

  if (root.contains("folner"))
    for (const json& f : c.get_arr(root, "folner")) cfg.folner.push_back(build_folner(c, f, dim));
  if (cfg.folner.empty()) cfg.folner.push_back(standard_folner(dim, FolnerStyle::forward));

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path, 1);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace meandiam
