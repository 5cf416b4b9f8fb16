#include "meandiam/factors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

namespace meandiam {

namespace {

constexpr size_t kFiberBudget = size_t(1) << 20;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

FiberApprox resolve_fiber(const FactorMap& pi, const Point& y, double mesh) {
  if (pi.fiber_hint) return fiber(pi, y, mesh, 2 * mesh);
  return fiber_adaptive(pi, y, mesh);
}

}  // namespace

double factor_modulus(const FactorMap& pi, double mesh, int samples) {
  NetSet net = pi.source.net(mesh);
  if (net.points.size() < 2) return 0.0;
  const SystemModel& sm = pi.source.m();
  const SystemModel& tm = pi.target.m();
  std::mt19937 rng(9001);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point& a = net.points[rng() % net.points.size()];
    Point ya = pi.map(a);
    for (const Point& b : net.points) {
      if (a == b) continue;
      if (sm.metric(a, b) <= 2 * mesh)
        worst = std::max(worst, tm.metric(ya, pi.map(b)));
    }
  }
  return worst;
}

FiberApprox fiber(const FactorMap& pi, const Point& y, double mesh, double slack) {
  FiberApprox fa;
  fa.y = y;
  if (pi.fiber_hint) {
    if (auto hint = pi.fiber_hint(y, mesh)) {
      if (hint->points.empty())
        throw std::logic_error("fiber: hint returned an empty set");
      fa.points = std::move(*hint);
      fa.slack = 0.0;
      fa.reliable = true;
      return fa;
    }
  }
  NetSet net = pi.source.net(mesh);
  if (net.points.empty()) throw std::logic_error("fiber: empty source net");
  fa.slack = std::max(slack, factor_modulus(pi, mesh));
  const SystemModel& tm = pi.target.m();
  NetSet sel;
  sel.mesh = mesh;
  sel.certified = false;
  sel.model = pi.source.model();
  double best = std::numeric_limits<double>::infinity();
  Point nearest;
  for (const Point& x : net.points) {
    double d = tm.metric(pi.map(x), y);
    if (d <= fa.slack) sel.points.push_back(x);
    if (d < best) {
      best = d;
      nearest = x;
    }
  }
  if (sel.points.empty()) {
    sel.points.push_back(nearest);
    fa.reliable = false;
  }
  sel.points = canonical_points(std::move(sel.points));
  fa.points = std::move(sel);
  return fa;
}

FiberApprox fiber_adaptive(const FactorMap& pi, const Point& y, double mesh) {
  FiberApprox best;
  bool have_stable = false;
  for (int iter = 0; iter < 6; ++iter) {
    // Refine mesh and slack together: the slack floor inside fiber() tracks
    // the probed modulus at the current mesh, so shrinking only the slack
    // argument would stall at the first level's resolution.
    double m = mesh / double(1 << iter);
    double slack = 2 * m;
    FiberApprox f0 = fiber(pi, y, m, slack);
    FiberApprox f1 = fiber(pi, y, m / 2, slack);
    FiberApprox f2 = fiber(pi, y, m / 4, slack);
    bool consistent = f0.reliable && f1.reliable && f2.reliable &&
                      f0.points.points.size() == f1.points.points.size() &&
                      f1.points.points.size() == f2.points.points.size();
    // Keep the tightest mesh-consistent level: smaller slack discards
    // near-misses that merely sit within metric resolution of y without
    // belonging to the fiber, while levels where a boundary point flickers
    // across refinements are skipped.
    if (consistent) {
      best = std::move(f0);
      have_stable = true;
    } else if (!have_stable) {
      best = std::move(f0);
    }
  }
  if (!have_stable) best.reliable = false;
  return best;
}

std::vector<Point> sample_targets(const System& target, int count, double mesh, unsigned seed) {
  std::vector<Point> out;
  for (const Point& p : target.m().distinguished_points()) {
    if ((int)out.size() >= count) break;
    out.push_back(p);
  }
  if (auto pool = target.m().sample_pool(mesh, count, seed)) {
    for (const Point& cand : *pool) {
      if ((int)out.size() >= count) break;
      if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
    }
    return out;
  }
  NetSet net = target.net(mesh);
  std::vector<size_t> idx(net.points.size());
  std::iota(idx.begin(), idx.end(), size_t(0));
  std::mt19937 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (size_t k = 0; k < idx.size() && (int)out.size() < count; ++k) {
    const Point& cand = net.points[idx[k]];
    if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
  }
  return out;
}

namespace {

RegularityReport run_battery(const FactorMap& pi, const std::vector<Point>& ys,
                             const FolnerSequence& F, const RegularityParams& rp, Mode mode) {
  if (ys.empty()) throw std::invalid_argument("regularity: empty target sample");
  if (rp.eps_schedule.empty())
    throw std::invalid_argument("regularity: empty eps schedule");
  const EstimatorParams& ep = rp.estimator;
  const int dim = pi.source.dimension();
  const double floor_eps =
      *std::min_element(rp.eps_schedule.begin(), rp.eps_schedule.end());
  const double tol = ep.tol_abs;
  const std::string check_name =
      mode == Mode::banach_sup ? "diam_mean_proximal" : "f_diam_mean_proximal";
  const std::string params = "mode=" + mode_to_string(mode) + ";n_max=" +
                             std::to_string(ep.n_max) + ";radius=" +
                             std::to_string(mode == Mode::banach_sup ? ep.effective_radius() : 0) +
                             ";mesh=" + fmt(rp.fiber_mesh) + ";eps_floor=" + fmt(floor_eps) +
                             ";fibers=" + std::to_string(ys.size()) + ";F=" + F.label;

  RegularityReport rep;
  Window domain = estimator_domain(F, ep, dim, mode);
  const i64 dvol = domain.volume();

  bool any_unreliable = false;
  bool cross_failed = false;
  double worst_diam = 0.0;
  bool diam_all_holds = true, diam_any_fail = false;
  double worst_dens_lhs = 0.0, worst_dens_rhs = floor_eps;
  double worst_dens_margin = std::numeric_limits<double>::infinity();
  bool dens_all_holds = true, dens_any_fail = false;

  std::mt19937 cross_rng(rp.seed);
  for (const Point& y : ys) {
    FiberApprox fa = resolve_fiber(pi, y, rp.fiber_mesh);
    if (!fa.reliable) {
      any_unreliable = true;
      rep.notes.push_back("fiber approximation unreliable at y=" + y.str());
    }
    DiamProfile prof = diam_profile(pi.source, fa.points, domain, ep);
    auto vals = std::make_shared<std::vector<double>>(size_t(dvol), 0.0);
    for (i64 i = 0; i < dvol; ++i)
      (*vals)[size_t(i)] = prof.fn.evaluate(domain.element_at(i));
    Window dom_copy = domain;
    OrbitObservable cached{
        [vals, dom_copy](const GroupElement& g) { return (*vals)[size_t(dom_copy.index_of(g))]; },
        prof.fn.bound, "diam"};
    Estimate dest = mode == Mode::banach_sup ? orbit_banach_mean(F, cached, dim, ep)
                                             : orbit_mean_along(F, cached, dim, ep);
    dest.net_gap = prof.gap;
    rep.fiber_estimates.push_back(dest);
    rep.fiber_estimates.back().label = "fiber(" + y.str() + ")|" + dest.label;

    // Translate identity: the profile value at g must match the diameter of
    // the independently resolved fiber over g.y, up to the net gaps.
    for (int s = 0; s < rp.crosscheck_samples; ++s) {
      i64 span = 50;
      std::vector<i64> gc(size_t(dim), 0);
      for (int i = 0; i < dim; ++i) gc[size_t(i)] = i64(cross_rng() % (2 * span + 1)) - span;
      GroupElement g{gc};
      FiberApprox fg = resolve_fiber(pi, pi.target.act(g, y), rp.fiber_mesh);
      double via_profile = prof.fn.evaluate(g);
      double via_fiber = diam_set(fg.points);
      double allow = prof.gap + 2 * (fa.slack + fg.slack) + 1e-9;
      if (std::abs(via_profile - via_fiber) > allow) {
        cross_failed = true;
        rep.notes.push_back("translate identity cross-check failed at y=" + y.str() +
                            " g=" + g.str() + ": profile=" + fmt(via_profile) +
                            " fiber=" + fmt(via_fiber));
        break;
      }
    }

    worst_diam = std::max(worst_diam, dest.value);
    bool diam_ok = dest.value <= floor_eps + tol;
    diam_all_holds = diam_all_holds && diam_ok && dest.stabilized;
    if (!diam_ok && tail_converged(dest, ep)) diam_any_fail = true;

    for (double eps : rp.eps_schedule) {
      GroupPredicate big = [vals, dom_copy, eps](const GroupElement& g) {
        return (*vals)[size_t(dom_copy.index_of(g))] > eps;
      };
      Estimate dens = mode == Mode::banach_sup
                          ? upper_banach_density(F, big, dim, ep)
                          : density_along(F, big, dim, ep).first;
      bool ok = dens.value <= eps + tol;
      bool stab = dens.stabilized && dest.stabilized;
      dens_all_holds = dens_all_holds && ok && stab;
      double margin = eps + tol - dens.value;
      if (margin < worst_dens_margin) {
        worst_dens_margin = margin;
        worst_dens_lhs = dens.value;
        worst_dens_rhs = eps;
      }
      RegularityRow row;
      row.fiber_y = y.str();
      row.eps = eps;
      row.diam_estimate = dest.value;
      row.density_estimate = dens.value;
      row.stabilized = stab;
      // A bound claim (holds) accepts one-sided monotone stabilization; an
      // exceedance claim (fails) insists the tail has actually converged.
      if (ok)
        row.verdict = stab ? Outcome::holds : Outcome::inconclusive;
      else
        row.verdict = tail_converged(dens, ep) ? Outcome::fails : Outcome::inconclusive;
      if (row.verdict == Outcome::fails) dens_any_fail = true;
      rep.rows.push_back(std::move(row));
    }
  }

  auto downgrade = [&](Outcome o) {
    if (any_unreliable || cross_failed) return Outcome::inconclusive;
    return o;
  };

  rep.diam_verdict.check = check_name + "(diam)";
  rep.diam_verdict.params = params;
  rep.diam_verdict.tolerance = tol;
  rep.diam_verdict.lhs = worst_diam;
  rep.diam_verdict.rhs = floor_eps;
  rep.diam_verdict.outcome =
      downgrade(diam_any_fail ? Outcome::fails
                              : (diam_all_holds ? Outcome::holds : Outcome::inconclusive));

  rep.density_verdict.check = check_name + "(density)";
  rep.density_verdict.params = params;
  rep.density_verdict.tolerance = tol;
  rep.density_verdict.lhs = worst_dens_lhs;
  rep.density_verdict.rhs = worst_dens_rhs;
  rep.density_verdict.outcome =
      downgrade(dens_any_fail ? Outcome::fails
                              : (dens_all_holds ? Outcome::holds : Outcome::inconclusive));

  rep.overall.check = check_name;
  rep.overall.params = params;
  rep.overall.tolerance = tol;
  Outcome d = rep.diam_verdict.outcome, q = rep.density_verdict.outcome;
  if (d == Outcome::fails || q == Outcome::fails) {
    rep.overall.outcome = Outcome::fails;
    const Verdict& bad = d == Outcome::fails ? rep.diam_verdict : rep.density_verdict;
    rep.overall.lhs = bad.lhs;
    rep.overall.rhs = bad.rhs;
  } else if (d == Outcome::holds && q == Outcome::holds) {
    rep.overall.outcome = Outcome::holds;
    rep.overall.lhs = rep.diam_verdict.lhs;
    rep.overall.rhs = rep.diam_verdict.rhs;
  } else {
    rep.overall.outcome = Outcome::inconclusive;
    rep.overall.lhs = rep.diam_verdict.lhs;
    rep.overall.rhs = rep.diam_verdict.rhs;
  }
  rep.overall.notes = rep.notes;
  return rep;
}

}  // namespace

RegularityReport diam_mean_proximal_test(const FactorMap& pi, const std::vector<Point>& ys,
                                         const FolnerSequence& F, const RegularityParams& rp) {
  return run_battery(pi, ys, F, rp, Mode::banach_sup);
}

RegularityReport f_diam_mean_proximal_test(const FactorMap& pi, const std::vector<Point>& ys,
                                           const FolnerSequence& F, const RegularityParams& rp) {
  return run_battery(pi, ys, F, rp, Mode::along_folner);
}

std::pair<System, FactorMap> build_H_pi(const FactorMap& pi, double mesh) {
  NetSet ynet = pi.target.net(mesh);
  std::vector<NetSet> seeds;
  std::vector<std::pair<Point, NetSet>> fibers;
  for (const Point& y : ynet.points) {
    FiberApprox fa = resolve_fiber(pi, y, mesh);
    seeds.push_back(fa.points);
    fibers.emplace_back(y, fa.points);
  }
  System H = hyper_system(pi.source, seeds);
  FactorMap piH;
  piH.source = H;
  piH.target = pi.target;
  auto base_map = pi.map;
  piH.map = [base_map](const Point& A) {
    const auto& elems = A.as<SetPoint>().elems;
    if (elems.empty()) throw std::invalid_argument("pi_H: empty set point");
    return base_map(elems.front());
  };
  auto h_model = H.model();
  piH.fiber_hint = [fibers, h_model](const Point& y, double m) -> std::optional<NetSet> {
    for (const auto& [base_y, fib] : fibers) {
      if (!(base_y == y)) continue;
      NetSet out;
      out.points.push_back(make_point(SetPoint{fib.points}));
      for (const Point& x : fib.points)
        out.points.push_back(make_point(SetPoint{{x}}));
      out.points = canonical_points(std::move(out.points));
      out.mesh = m;
      out.certified = false;
      out.model = h_model;
      return out;
    }
    return std::nullopt;
  };
  piH.label = "H_pi(" + pi.label + ")";
  piH.banach_proximal = pi.banach_proximal;
  return {std::move(H), std::move(piH)};
}

FactorMap product_factor(const std::vector<FactorMap>& pis, ProductMetric mode) {
  if (pis.empty()) throw std::invalid_argument("product_factor: empty list");
  std::vector<System> sources, targets;
  std::vector<std::function<Point(const Point&)>> maps;
  for (const FactorMap& p : pis) {
    sources.push_back(p.source);
    targets.push_back(p.target);
    maps.push_back(p.map);
  }
  FactorMap out;
  out.source = make_product(sources, mode);
  out.target = make_product(targets, mode);
  out.map = [maps](const Point& x) {
    const auto& parts = x.as<ProductPoint>().parts;
    if (parts.size() != maps.size())
      throw std::invalid_argument("product_factor: arity mismatch");
    ProductPoint img;
    for (size_t i = 0; i < maps.size(); ++i) img.parts.push_back(maps[i](parts[i]));
    return make_point(std::move(img));
  };
  auto base = pis;  // copy for the hint closure
  auto source_model = out.source.model();
  out.fiber_hint = [base, source_model](const Point& y, double mesh) -> std::optional<NetSet> {
    const auto& parts = y.as<ProductPoint>().parts;
    if (parts.size() != base.size()) return std::nullopt;
    auto factor_nets = std::make_shared<std::vector<NetSet>>();
    size_t total = 1;
    for (size_t i = 0; i < base.size(); ++i) {
      FiberApprox fa = resolve_fiber(base[i], parts[i], mesh);
      if (!fa.reliable) return std::nullopt;
      total *= fa.points.points.size();
      if (total > kFiberBudget) return std::nullopt;
      factor_nets->push_back(fa.points);
    }
    NetSet out_net;
    std::vector<size_t> counter(base.size(), 0);
    while (true) {
      ProductPoint tuple;
      for (size_t i = 0; i < base.size(); ++i)
        tuple.parts.push_back((*factor_nets)[i].points[counter[i]]);
      out_net.points.push_back(make_point(std::move(tuple)));
      size_t axis = base.size();
      while (axis > 0) {
        --axis;
        if (++counter[axis] < (*factor_nets)[axis].points.size()) break;
        counter[axis] = 0;
        if (axis == 0) goto done;
      }
    }
  done:
    out_net.points = canonical_points(std::move(out_net.points));
    out_net.mesh = mesh;
    out_net.certified = true;
    out_net.model = source_model;
    out_net.factors = factor_nets;
    return out_net;
  };
  std::string label = "prod(";
  for (size_t i = 0; i < pis.size(); ++i) label += (i ? ";" : "") + pis[i].label;
  out.label = label + ")";
  out.banach_proximal = std::all_of(pis.begin(), pis.end(),
                                    [](const FactorMap& p) { return p.banach_proximal; });
  return out;
}

FactorMap compose_factor(const FactorMap& phi, const FactorMap& psi) {
  if (phi.source.model() != psi.target.model())
    throw std::invalid_argument("compose_factor: middle systems differ");
  FactorMap out;
  out.source = psi.source;
  out.target = phi.target;
  auto f = phi.map;
  auto g = psi.map;
  out.map = [f, g](const Point& x) { return f(g(x)); };
  FactorMap phi_copy = phi, psi_copy = psi;
  auto source_model = psi.source.model();
  out.fiber_hint = [phi_copy, psi_copy, source_model](const Point& z,
                                                      double mesh) -> std::optional<NetSet> {
    FiberApprox mid = resolve_fiber(phi_copy, z, mesh);
    if (!mid.reliable) return std::nullopt;
    NetSet out_net;
    bool certified = mid.points.certified;
    for (const Point& y : mid.points.points) {
      FiberApprox fy = resolve_fiber(psi_copy, y, mesh);
      if (!fy.reliable) return std::nullopt;
      certified = certified && fy.points.certified;
      out_net.points.insert(out_net.points.end(), fy.points.points.begin(),
                            fy.points.points.end());
      if (out_net.points.size() > kFiberBudget) return std::nullopt;
    }
    out_net.points = canonical_points(std::move(out_net.points));
    out_net.mesh = mesh;
    out_net.certified = certified;
    out_net.model = source_model;
    return out_net;
  };
  out.label = phi.label + " o " + psi.label;
  out.banach_proximal = phi.banach_proximal && psi.banach_proximal;
  return out;
}

FactorMap hyper_lift(const FactorMap& pi) {
  FactorMap out;
  out.source = hyper_system(pi.source);
  out.target = hyper_system(pi.target);
  auto base_map = pi.map;
  out.map = [base_map](const Point& A) {
    std::vector<Point> img;
    for (const Point& x : A.as<SetPoint>().elems) img.push_back(base_map(x));
    return make_point(SetPoint{canonical_points(std::move(img))});
  };
  FactorMap base = pi;
  auto h_model = out.source.model();
  out.fiber_hint = [base, h_model](const Point& B, double mesh) -> std::optional<NetSet> {
    const auto& ys = B.as<SetPoint>().elems;
    if (ys.empty()) return std::nullopt;
    std::vector<std::vector<Point>> per;
    size_t max_rank = 0;
    for (const Point& y : ys) {
      FiberApprox fa = resolve_fiber(base, y, mesh);
      if (!fa.reliable) return std::nullopt;
      per.push_back(fa.points.points);
      max_rank = std::max(max_rank, per.back().size());
    }
    NetSet out_net;
    std::vector<Point> all;
    for (const auto& f : per) all.insert(all.end(), f.begin(), f.end());
    out_net.points.push_back(make_point(SetPoint{canonical_points(std::move(all))}));
    for (size_t k = 0; k < max_rank; ++k) {
      std::vector<Point> sel;
      for (const auto& f : per) sel.push_back(f[std::min(k, f.size() - 1)]);
      out_net.points.push_back(make_point(SetPoint{canonical_points(std::move(sel))}));
    }
    out_net.points = canonical_points(std::move(out_net.points));
    out_net.mesh = mesh;
    out_net.certified = false;
    out_net.model = h_model;
    return out_net;
  };
  out.label = "H(" + pi.label + ")";
  out.banach_proximal = false;
  return out;
}

std::vector<std::string> validate_factor(const FactorMap& pi, double mesh, int samples,
                                         unsigned seed) {
  std::vector<std::string> issues;
  if (pi.source.dimension() != pi.target.dimension()) {
    issues.push_back("acting-group rank mismatch");
    return issues;
  }
  const int dim = pi.source.dimension();
  NetSet snet = pi.source.net(mesh);
  NetSet tnet = pi.target.net(mesh);
  if (snet.points.empty() || tnet.points.empty()) {
    issues.push_back("empty net");
    return issues;
  }
  std::mt19937 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Point& x = snet.points[rng() % snet.points.size()];
    std::vector<i64> gc(size_t(dim), 0);
    for (int i = 0; i < dim; ++i) gc[size_t(i)] = i64(rng() % 41) - 20;
    GroupElement g{gc};
    Point lhs = pi.map(pi.source.act(g, x));
    Point rhs = pi.target.act(g, pi.map(x));
    if (!(lhs == rhs)) {
      issues.push_back("equivariance violated at g=" + g.str() + ", x=" + x.str());
      break;
    }
  }
  // Source nets keep one representative per mesh cell, so the image can miss
  // a target net point by up to the covering radius plus however far the
  // image moves across one source mesh step (the probed modulus).
  const SystemModel& tm = pi.target.m();
  const double allow = 2 * mesh + factor_modulus(pi, mesh) + 1e-12;
  for (const Point& y : tnet.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& x : snet.points) best = std::min(best, tm.metric(pi.map(x), y));
    if (best > allow) {
      issues.push_back("image misses target net point " + y.str() + " by " + fmt(best));
      break;
    }
  }
  return issues;
}

}  // namespace meandiam
