#include "meandiam/equicontinuity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include "meandiam/systems.hpp"

namespace meandiam {

namespace {

/// Net mesh for drawing base-point samples in the quantified variants.
constexpr double kSampleMesh = 0.05;

/// A converged exceedance at the smallest grid delta only counts as failure
/// evidence when the estimate has stopped shrinking across the tested scales.
/// Balls nest, so the level values are non-increasing in delta up to net
/// noise; a relative drop beyond this fraction from the coarsest level to the
/// finest means finer balls were still getting cheaper and the sweep simply
/// ran out of grid, which reads inconclusive rather than fails.
constexpr double kScaleDropTol = 0.4;

bool scale_settled(double coarsest, double finest) {
  return finest >= (1.0 - kScaleDropTol) * coarsest;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> grid_or_default(const DmeParams& dp) {
  std::vector<double> grid = dp.delta_grid.empty() ? default_delta_grid(dp) : dp.delta_grid;
  if (grid.empty()) throw std::invalid_argument("dme: empty delta grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] >= grid[i - 1])
      throw std::invalid_argument("dme: delta grid must be strictly decreasing");
  if (dp.eps_schedule.empty()) throw std::invalid_argument("dme: empty eps schedule");
  return grid;
}

/// Ball estimate plus the tabulated diameter profile it was computed from,
/// kept so the density criterion can reuse the same table.
struct BallLevel {
  double delta = 0;
  Estimate est;
  std::shared_ptr<std::vector<double>> vals;
  double gap = 0;
};

BallLevel ball_level(const System& X, const Point& x, double delta, const FolnerSequence& F,
                     const Window& domain, const EstimatorParams& ep, Mode mode) {
  BallLevel lv;
  lv.delta = delta;
  NetSet ball = ball_net(X, x, delta, X.ball_resolution(delta));
  DiamProfile prof = diam_profile(X, ball, domain, ep);
  const i64 dvol = domain.volume();
  auto vals = std::make_shared<std::vector<double>>(size_t(dvol), 0.0);
  for (i64 i = 0; i < dvol; ++i) (*vals)[size_t(i)] = prof.fn.evaluate(domain.element_at(i));
  Window dom_copy = domain;
  OrbitObservable cached{
      [vals, dom_copy](const GroupElement& g) { return (*vals)[size_t(dom_copy.index_of(g))]; },
      prof.fn.bound, "Diam(B_" + fmt(delta) + ")"};
  lv.est = mode == Mode::banach_sup ? orbit_banach_mean(F, cached, X.dimension(), ep)
                                    : orbit_mean_along(F, cached, X.dimension(), ep);
  lv.est.net_gap = prof.gap;
  lv.gap = prof.gap;
  lv.vals = std::move(vals);
  return lv;
}

std::string sweep_params(Mode mode, const EstimatorParams& ep, const std::vector<double>& grid,
                         const FolnerSequence& F, int points) {
  std::string s = "mode=" + mode_to_string(mode) + ";n_max=" + std::to_string(ep.n_max) +
                  ";radius=" +
                  std::to_string(mode == Mode::banach_sup ? ep.effective_radius() : 0) +
                  ";deltas=" + fmt(grid.front()) + ".." + fmt(grid.back()) + ";F=" + F.label;
  if (points > 0) s += ";points=" + std::to_string(points);
  return s;
}

void finish_verdict(DmeReport& rep) {
  bool all_holds = true, any_fails = false;
  for (const DmeCell& c : rep.cells) {
    all_holds = all_holds && c.verdict == Outcome::holds;
    any_fails = any_fails || c.verdict == Outcome::fails;
  }
  rep.verdict =
      any_fails ? Outcome::fails : (all_holds ? Outcome::holds : Outcome::inconclusive);
}

DmeReport point_test(const System& X, const Point& x, const FolnerSequence& F,
                     const DmeParams& dp, Mode mode) {
  auto grid = grid_or_default(dp);
  const EstimatorParams& ep = dp.estimator;
  const int dim = X.dimension();
  Window domain = estimator_domain(F, ep, dim, mode);

  DmeReport rep;
  rep.point = x.str();
  rep.mode = mode;
  rep.params = sweep_params(mode, ep, grid, F, 0);

  std::vector<BallLevel> levels;
  levels.reserve(grid.size());
  for (double d : grid) levels.push_back(ball_level(X, x, d, F, domain, ep, mode));
  for (const BallLevel& lv : levels) {
    rep.traces.push_back(lv.est);
    rep.traces.back().label += "@x=" + rep.point;
  }

  bool mismatch = false;
  for (double eps : dp.eps_schedule) {
    DmeCell cell;
    cell.eps = eps;
    const BallLevel* hit = nullptr;
    for (const BallLevel& lv : levels) {
      if (lv.est.value <= eps + ep.tol_abs && lv.est.stabilized) {
        hit = &lv;
        break;
      }
    }
    if (hit) {
      cell.delta = hit->delta;
      cell.estimate = hit->est.value;
      cell.stabilized = true;
      cell.verdict = Outcome::holds;
    } else {
      // Balls nest, so the smallest grid delta carries the strongest
      // evidence; only a converged, scale-settled exceedance there
      // witnesses failure.
      const BallLevel& last = levels.back();
      cell.delta = last.delta;
      cell.estimate = last.est.value;
      cell.stabilized = last.est.stabilized;
      bool exceeds = last.est.value > eps + ep.tol_abs && tail_converged(last.est, ep);
      bool settled = scale_settled(levels.front().est.value, last.est.value);
      cell.verdict = (exceeds && settled) ? Outcome::fails : Outcome::inconclusive;
      if (exceeds && !settled)
        rep.notes.push_back("eps=" + fmt(eps) + ": exceedance at delta=" + fmt(last.delta) +
                            " still declining across scales (" +
                            fmt(levels.front().est.value) + " -> " + fmt(last.est.value) +
                            "); extend the delta grid to decide");
    }

    // Density form of the same property: the bad translate set
    // {g : diam(g.B_delta(x)) > eps} must have upper density at most eps for
    // some delta. Both verdicts must agree whenever both are decisive.
    Outcome dens_verdict = Outcome::inconclusive;
    Window dom_copy = domain;
    double dens_first = 0;
    for (size_t l = 0; l < levels.size(); ++l) {
      auto vals = levels[l].vals;
      GroupPredicate bad = [vals, dom_copy, eps](const GroupElement& g) {
        return (*vals)[size_t(dom_copy.index_of(g))] > eps;
      };
      Estimate dens = mode == Mode::banach_sup ? upper_banach_density(F, bad, dim, ep)
                                               : density_along(F, bad, dim, ep).first;
      if (l == 0) dens_first = dens.value;
      if (dens.value <= eps + ep.tol_abs && dens.stabilized) {
        dens_verdict = Outcome::holds;
        break;
      }
      if (l + 1 == levels.size() && dens.value > eps + ep.tol_abs && tail_converged(dens, ep) &&
          scale_settled(dens_first, dens.value))
        dens_verdict = Outcome::fails;
    }
    if (cell.verdict != Outcome::inconclusive && dens_verdict != Outcome::inconclusive &&
        cell.verdict != dens_verdict) {
      mismatch = true;
      rep.notes.push_back("density criterion disagrees at eps=" + fmt(eps) +
                          ": ball=" + outcome_to_string(cell.verdict) +
                          " density=" + outcome_to_string(dens_verdict));
    }
    rep.cells.push_back(cell);
  }

  finish_verdict(rep);
  if (mismatch) rep.verdict = Outcome::inconclusive;
  return rep;
}

DmeReport global_test(const System& X, const FolnerSequence& F, const DmeParams& dp, Mode mode) {
  auto grid = grid_or_default(dp);
  const EstimatorParams& ep = dp.estimator;
  const int dim = X.dimension();
  Window domain = estimator_domain(F, ep, dim, mode);
  std::vector<Point> xs = sample_targets(X, dp.sample_points, kSampleMesh, dp.seed);
  if (xs.empty()) throw std::logic_error("dme: empty base-point sample");

  DmeReport rep;
  rep.point = "global";
  rep.mode = mode;
  rep.params = sweep_params(mode, ep, grid, F, int(xs.size()));

  std::vector<std::vector<Estimate>> est(grid.size());
  for (size_t l = 0; l < grid.size(); ++l) {
    est[l].reserve(xs.size());
    for (const Point& x : xs)
      est[l].push_back(ball_level(X, x, grid[l], F, domain, ep, mode).est);
    size_t wi = 0;
    for (size_t i = 1; i < xs.size(); ++i)
      if (est[l][i].value > est[l][wi].value) wi = i;
    rep.traces.push_back(est[l][wi]);
    rep.traces.back().label += "@x=" + xs[wi].str();
  }

  for (double eps : dp.eps_schedule) {
    DmeCell cell;
    cell.eps = eps;
    bool decided = false;
    for (size_t l = 0; l < grid.size() && !decided; ++l) {
      bool all = true;
      double worst = 0;
      for (const Estimate& e : est[l]) {
        all = all && e.value <= eps + ep.tol_abs && e.stabilized;
        worst = std::max(worst, e.value);
      }
      if (all) {
        cell.delta = grid[l];
        cell.estimate = worst;
        cell.stabilized = true;
        cell.verdict = Outcome::holds;
        decided = true;
      }
    }
    if (!decided) {
      const size_t l = grid.size() - 1;
      double worst = 0;
      bool all_stab = true, gated = false;
      int witness = -1;
      for (size_t i = 0; i < xs.size(); ++i) {
        const Estimate& e = est[l][i];
        worst = std::max(worst, e.value);
        all_stab = all_stab && e.stabilized;
        if (witness >= 0 || e.value <= eps + ep.tol_abs || !tail_converged(e, ep)) continue;
        if (scale_settled(est[0][i].value, e.value))
          witness = int(i);
        else
          gated = true;
      }
      cell.delta = grid[l];
      cell.estimate = worst;
      cell.stabilized = all_stab;
      cell.verdict = witness >= 0 ? Outcome::fails : Outcome::inconclusive;
      if (witness >= 0)
        rep.notes.push_back("eps=" + fmt(eps) + " fails at x=" + xs[size_t(witness)].str() +
                            " delta=" + fmt(grid[l]));
      else if (gated)
        rep.notes.push_back("eps=" + fmt(eps) + ": exceedance at delta=" + fmt(grid[l]) +
                            " still declining across scales; extend the delta grid to decide");
    }
    rep.cells.push_back(cell);
  }

  finish_verdict(rep);
  return rep;
}

}  // namespace

std::vector<double> default_delta_grid(const DmeParams& dp) {
  if (!(dp.mesh > 0)) throw std::invalid_argument("dme: mesh must be positive");
  std::vector<double> grid;
  for (double d = 0.5; d >= 4 * dp.mesh - 1e-15; d /= 2) grid.push_back(d);
  return grid;
}

DmeReport dme_point_test(const System& X, const Point& x, const FolnerSequence& F,
                         const DmeParams& dp) {
  return point_test(X, x, F, dp, Mode::banach_sup);
}

DmeReport f_dme_point_test(const System& X, const Point& x, const FolnerSequence& F,
                           const DmeParams& dp) {
  return point_test(X, x, F, dp, Mode::along_folner);
}

DmeReport dme_global_test(const System& X, const FolnerSequence& F, const DmeParams& dp) {
  return global_test(X, F, dp, Mode::banach_sup);
}

DmeReport f_dme_global_test(const System& X, const FolnerSequence& F, const DmeParams& dp) {
  return global_test(X, F, dp, Mode::along_folner);
}

DmeReport mean_equicontinuity_test(const System& X, const FolnerSequence& F,
                                   const DmeParams& dp) {
  auto grid = grid_or_default(dp);
  const EstimatorParams& ep = dp.estimator;
  std::vector<Point> xs = sample_targets(X, dp.sample_points, kSampleMesh, dp.seed);
  if (xs.empty()) throw std::logic_error("dme: empty base-point sample");

  DmeReport rep;
  rep.point = "mean-eq";
  rep.mode = Mode::banach_sup;
  rep.params = sweep_params(Mode::banach_sup, ep, grid, F, int(xs.size()));

  struct PairEst {
    Estimate est;
    std::string tag;
  };
  std::vector<std::vector<PairEst>> pairs(grid.size());
  for (size_t l = 0; l < grid.size(); ++l) {
    for (const Point& x : xs) {
      NetSet bn = ball_net(X, x, grid[l], grid[l] / 2);
      std::vector<const Point*> cand;
      cand.reserve(bn.points.size());
      for (const Point& p : bn.points)
        if (!(p == x)) cand.push_back(&p);
      // The farthest partners are the natural witnesses for the supremum
      // over the ball, so spend the pair budget on them first.
      std::stable_sort(cand.begin(), cand.end(), [&](const Point* a, const Point* b) {
        return X.metric(x, *a) > X.metric(x, *b);
      });
      if (cand.size() > size_t(dp.pair_cap)) cand.resize(size_t(dp.pair_cap));
      for (const Point* p : cand)
        pairs[l].push_back({weyl_distance(F, X, x, *p, ep), x.str() + " ~ " + p->str()});
    }
    if (pairs[l].empty())
      rep.notes.push_back("no partners sampled at delta=" + fmt(grid[l]) +
                          " (pairs hold vacuously)");
  }

  std::vector<double> level_worst(grid.size(), 0.0);
  for (size_t l = 0; l < grid.size(); ++l) {
    const PairEst* w = nullptr;
    for (const PairEst& pe : pairs[l]) {
      level_worst[l] = std::max(level_worst[l], pe.est.value);
      if (!w || pe.est.value > w->est.value) w = &pe;
    }
    if (w) {
      rep.traces.push_back(w->est);
      rep.traces.back().label += "@delta=" + fmt(grid[l]) + " " + w->tag;
    }
  }

  for (double eps : dp.eps_schedule) {
    DmeCell cell;
    cell.eps = eps;
    bool decided = false;
    for (size_t l = 0; l < grid.size() && !decided; ++l) {
      bool all = true;
      double worst = 0;
      for (const PairEst& pe : pairs[l]) {
        all = all && pe.est.value <= eps + ep.tol_abs && pe.est.stabilized;
        worst = std::max(worst, pe.est.value);
      }
      if (all) {
        cell.delta = grid[l];
        cell.estimate = worst;
        cell.stabilized = true;
        cell.verdict = Outcome::holds;
        decided = true;
      }
    }
    if (!decided) {
      const size_t l = grid.size() - 1;
      double worst = 0;
      bool all_stab = true, gated = false;
      const PairEst* witness = nullptr;
      for (const PairEst& pe : pairs[l]) {
        worst = std::max(worst, pe.est.value);
        all_stab = all_stab && pe.est.stabilized;
        if (witness || pe.est.value <= eps + ep.tol_abs || !tail_converged(pe.est, ep)) continue;
        if (scale_settled(level_worst.front(), pe.est.value))
          witness = &pe;
        else
          gated = true;
      }
      cell.delta = grid[l];
      cell.estimate = worst;
      cell.stabilized = all_stab;
      cell.verdict = witness ? Outcome::fails : Outcome::inconclusive;
      if (witness)
        rep.notes.push_back("eps=" + fmt(eps) + " fails on pair " + witness->tag +
                            " delta=" + fmt(grid[l]));
      else if (gated)
        rep.notes.push_back("eps=" + fmt(eps) + ": pair exceedance at delta=" + fmt(grid[l]) +
                            " still declining across scales; extend the delta grid to decide");
    }
    rep.cells.push_back(cell);
  }

  finish_verdict(rep);
  return rep;
}

SuiteReport theorem_suite(const System& X, const FactorMap& pi_eq, const FolnerSequence& F,
                          const SuiteParams& sp) {
  if (pi_eq.source.model() != X.model())
    throw std::invalid_argument("theorem_suite: pi_eq.source must be X");
  SuiteReport rep;
  const std::string sys = X.label();
  const EstimatorParams& ep = sp.dme.estimator;

  DmeReport dme = dme_global_test(X, F, sp.dme);
  rep.checks.push_back({sys, "dme_global", dme.verdict, dme.params, 0, 0, dme.notes});
  for (const Estimate& t : dme.traces) {
    rep.traces.push_back(t);
    rep.traces.back().label = "dme_global:" + t.label;
  }

  std::vector<Point> ys =
      sample_targets(pi_eq.target, sp.fiber_count, sp.regularity.fiber_mesh, sp.regularity.seed);
  RegularityReport reg = diam_mean_proximal_test(pi_eq, ys, F, sp.regularity);
  rep.checks.push_back({sys, "factor_regularity", reg.overall.outcome, reg.overall.params,
                        reg.overall.lhs, reg.overall.rhs, reg.notes});
  for (const Estimate& t : reg.fiber_estimates) {
    rep.traces.push_back(t);
    rep.traces.back().label = "factor_regularity:" + t.label;
  }

  {
    SuiteCheck c{sys, "agreement(dme,regularity)", Outcome::inconclusive, dme.params, 0, 0, {}};
    c.notes.push_back("dme=" + outcome_to_string(dme.verdict) +
                      " regularity=" + outcome_to_string(reg.overall.outcome));
    if (dme.verdict != Outcome::inconclusive && reg.overall.outcome != Outcome::inconclusive) {
      c.verdict = dme.verdict == reg.overall.outcome ? Outcome::holds : Outcome::fails;
      if (c.verdict == Outcome::fails)
        rep.red_flags.push_back(sys + ": global equicontinuity verdict " +
                                outcome_to_string(dme.verdict) +
                                " contradicts factor regularity verdict " +
                                outcome_to_string(reg.overall.outcome));
    }
    rep.checks.push_back(c);
  }
  const Outcome agreement = rep.checks.back().verdict;

  Outcome fiber_bound = Outcome::inconclusive;
  bool fiber_applicable = pi_eq.banach_proximal;
  {
    SuiteCheck c{sys, "fiber_ball_bound", Outcome::inconclusive, "", 0, 0, {}};
    c.scale_params = "deltas=" + fmt(sp.delta_schedule.front()) + ".." +
                     fmt(sp.delta_schedule.back()) + ";n_max=" + std::to_string(ep.n_max) +
                     ";F=" + F.label;
    if (!fiber_applicable) {
      c.notes.push_back("skipped: factor map is not banach-proximal");
    } else {
      const double m = sp.regularity.fiber_mesh;
      double lhs_worst = 0, fiber_gap = 0;
      bool fibers_ok = true, f_stab = true;
      std::vector<Point> reps;
      for (const Point& y : ys) {
        FiberApprox fa =
            pi_eq.fiber_hint ? fiber(pi_eq, y, m, 2 * m) : fiber_adaptive(pi_eq, y, m);
        if (!fa.reliable) {
          fibers_ok = false;
          c.notes.push_back("fiber unreliable at y=" + y.str());
          continue;
        }
        Estimate e = mean_diameter(F, X, fa.points, ep);
        lhs_worst = std::max(lhs_worst, e.value);
        fiber_gap = std::max(fiber_gap, e.net_gap);
        f_stab = f_stab && e.stabilized;
        reps.push_back(fa.points.points.front());
        rep.traces.push_back(e);
        rep.traces.back().label = "fiber_ball_bound:fiber(" + y.str() + ")|" + e.label;
      }
      std::vector<Point> xs = sample_targets(X, sp.dme.sample_points, kSampleMesh, sp.dme.seed);
      xs.insert(xs.end(), reps.begin(), reps.end());
      xs = canonical_points(std::move(xs));

      bool any_violation = false, b_stab = true;
      double worst_margin = std::numeric_limits<double>::infinity();
      for (double delta : sp.delta_schedule) {
        double rhs = 0, ball_gap = 0;
        Estimate ball_worst;
        bool have_worst = false;
        for (const Point& x : xs) {
          Estimate be = mean_diameter(F, X, ball_net(X, x, delta, X.ball_resolution(delta)), ep);
          rhs = std::max(rhs, be.value);
          ball_gap = std::max(ball_gap, be.net_gap);
          b_stab = b_stab && be.stabilized;
          if (!have_worst || be.value > ball_worst.value) {
            ball_worst = be;
            ball_worst.label = "fiber_ball_bound:ball@delta=" + fmt(delta) + "|" + be.label;
            have_worst = true;
          }
        }
        if (have_worst) rep.traces.push_back(ball_worst);
        double tol = ep.tol_abs + fiber_gap + ball_gap + 1e-9;
        double margin = rhs + tol - lhs_worst;
        if (margin < worst_margin) {
          worst_margin = margin;
          c.lhs = lhs_worst;
          c.rhs = rhs;
        }
        if (lhs_worst > rhs + tol) {
          any_violation = true;
          c.notes.push_back("violated at delta=" + fmt(delta) + ": fiber=" + fmt(lhs_worst) +
                            " ball=" + fmt(rhs));
        }
      }
      if (any_violation) {
        c.verdict = (f_stab && b_stab) ? Outcome::fails : Outcome::inconclusive;
        if (c.verdict == Outcome::fails)
          rep.red_flags.push_back(sys + ": fiber mean diameter exceeds the sampled ball bound");
      } else {
        c.verdict =
            (fibers_ok && f_stab && b_stab) ? Outcome::holds : Outcome::inconclusive;
      }
    }
    fiber_bound = c.verdict;
    rep.checks.push_back(c);
  }

  Outcome product = Outcome::inconclusive;
  if (sp.product_check) {
    // The product carries the diagonal action of the same group, so it is
    // tested along the same Folner sequence as the base system.
    System P = make_product({X, X});
    DmeReport pd = dme_global_test(P, F, sp.dme);
    for (const Estimate& t : pd.traces) {
      rep.traces.push_back(t);
      rep.traces.back().label = "product_dme:" + t.label;
    }
    SuiteCheck c{sys, "product_dme", Outcome::inconclusive, pd.params, 0, 0, {}};
    c.notes.push_back("base=" + outcome_to_string(dme.verdict) +
                      " product=" + outcome_to_string(pd.verdict));
    if (dme.verdict != Outcome::inconclusive && pd.verdict != Outcome::inconclusive) {
      c.verdict = dme.verdict == pd.verdict ? Outcome::holds : Outcome::fails;
      if (c.verdict == Outcome::fails)
        rep.red_flags.push_back(sys + ": product system flips the global verdict to " +
                                outcome_to_string(pd.verdict));
    }
    product = c.verdict;
    rep.checks.push_back(c);
  }

  if (!rep.red_flags.empty()) {
    rep.overall = Outcome::fails;
  } else {
    bool all = agreement == Outcome::holds &&
               (!fiber_applicable || fiber_bound == Outcome::holds) &&
               (!sp.product_check || product == Outcome::holds);
    rep.overall = all ? Outcome::holds : Outcome::inconclusive;
  }
  return rep;
}

}  // namespace meandiam
