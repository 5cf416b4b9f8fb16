#include "meandiam/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "meandiam/systems.hpp"

namespace meandiam {

std::string mode_to_string(Mode mode) {
  return mode == Mode::along_folner ? "along_folner" : "banach_sup";
}

std::string outcome_to_string(Outcome o) {
  switch (o) {
    case Outcome::holds:
      return "holds";
    case Outcome::fails:
      return "fails";
    default:
      return "inconclusive";
  }
}

double default_tolerance(const System& sys) { return sys.exact() ? 1e-9 : 1e-6; }

std::vector<i64> estimator_grid(const EstimatorParams& p) {
  if (p.n_min < 1 || p.n_max < p.n_min)
    throw std::invalid_argument("estimator_grid: need 1 <= n_min <= n_max");
  if (!(p.grid_ratio > 1.0))
    throw std::invalid_argument("estimator_grid: grid_ratio must exceed 1");
  std::vector<i64> grid;
  i64 n = p.n_min;
  while (n < p.n_max) {
    grid.push_back(n);
    n = std::max(n + 1, i64(std::ceil(double(n) * p.grid_ratio)));
  }
  grid.push_back(p.n_max);
  return grid;
}

size_t tail_start_index(size_t entries, double tail_frac) {
  if (entries == 0) return 0;
  if (!(tail_frac > 0) || tail_frac > 1)
    throw std::invalid_argument("tail_frac must lie in (0, 1]");
  size_t start = size_t(std::floor(double(entries) * (1.0 - tail_frac)));
  if (start >= entries) start = entries - 1;
  return start;
}

namespace {

constexpr i64 kTableBudget = i64(1) << 24;

void parallel_fill(std::vector<double>& out, int threads,
                   const std::function<double(i64)>& fn) {
  const i64 count = i64(out.size());
  if (threads <= 1 || count < 4096) {
    for (i64 i = 0; i < count; ++i) out[size_t(i)] = fn(i);
    return;
  }
  const int workers = std::min(threads, 32);
  const i64 chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    i64 lo = i64(w) * chunk;
    i64 hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&out, &fn, &first_error, &error_mutex, lo, hi] {
      try {
        for (i64 i = lo; i < hi; ++i) out[size_t(i)] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Inclusive d-dimensional prefix sums over a box domain; window sums become
/// O(2^d) corner differences. Accumulation order is fixed (axis by axis, row
/// major), so results are bit-deterministic.
class BoxSum {
 public:
  BoxSum(Window domain, std::vector<double> values) : domain_(std::move(domain)) {
    const int d = domain_.dim();
    dims_.resize(size_t(d));
    i64 total = 1;
    for (int i = 0; i < d; ++i) {
      dims_[size_t(i)] = domain_.extent[size_t(i)] + 1;
      total *= dims_[size_t(i)];
    }
    strides_.assign(size_t(d), 1);
    for (int i = d - 2; i >= 0; --i)
      strides_[size_t(i)] = strides_[size_t(i + 1)] * dims_[size_t(i + 1)];
    pre_.assign(size_t(total), 0.0);
    const i64 vol = domain_.volume();
    for (i64 idx = 0; idx < vol; ++idx) {
      i64 rem = idx;
      i64 padded = 0;
      for (int i = d - 1; i >= 0; --i) {
        i64 coord = rem % domain_.extent[size_t(i)];
        rem /= domain_.extent[size_t(i)];
        padded += (coord + 1) * strides_[size_t(i)];
      }
      pre_[size_t(padded)] = values[size_t(idx)];
    }
    for (int a = 0; a < d; ++a) {
      const i64 stride = strides_[size_t(a)];
      const i64 dim = dims_[size_t(a)];
      for (i64 idx = 0; idx < total; ++idx) {
        i64 coord = (idx / stride) % dim;
        if (coord > 0) pre_[size_t(idx)] += pre_[size_t(idx - stride)];
      }
    }
  }

  double sum(const Window& box) const {
    const int d = domain_.dim();
    std::vector<i64> lo(static_cast<size_t>(d), 0);
    std::vector<i64> hi(static_cast<size_t>(d), 0);
    for (int i = 0; i < d; ++i) {
      lo[size_t(i)] = box.origin.c[size_t(i)] - domain_.origin.c[size_t(i)];
      hi[size_t(i)] = lo[size_t(i)] + box.extent[size_t(i)] - 1;
      if (lo[size_t(i)] < 0 || hi[size_t(i)] >= domain_.extent[size_t(i)])
        throw std::logic_error("BoxSum: query box outside the table domain");
    }
    double total = 0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      i64 padded = 0;
      int low_axes = 0;
      for (int i = 0; i < d; ++i) {
        bool take_lo = (mask >> i) & 1u;
        i64 c = take_lo ? lo[size_t(i)] : hi[size_t(i)] + 1;
        if (take_lo) ++low_axes;
        padded += c * strides_[size_t(i)];
      }
      total += (low_axes % 2 == 0) ? pre_[size_t(padded)] : -pre_[size_t(padded)];
    }
    return total;
  }

 private:
  Window domain_;
  std::vector<i64> dims_;
  std::vector<i64> strides_;
  std::vector<double> pre_;
};

std::vector<Window> grid_windows(const FolnerSequence& F, const std::vector<i64>& grid, int dim) {
  std::vector<Window> windows;
  windows.reserve(grid.size());
  for (i64 n : grid) {
    Window w = F.window(n);
    if (w.dim() != dim)
      throw std::invalid_argument("averaging: Folner window rank mismatch");
    windows.push_back(w);
  }
  return windows;
}

Window hull_of(const std::vector<Window>& windows) {
  Window h = windows.front();
  for (const Window& w : windows) h = h.hull(w);
  return h;
}

BoxSum build_table(const Window& domain, const OrbitObservable& f, int threads) {
  i64 vol = domain.volume();
  if (vol > kTableBudget)
    throw std::invalid_argument("averaging: window table exceeds the memory budget");
  std::vector<double> table(static_cast<size_t>(vol), 0.0);
  parallel_fill(table, threads, [&](i64 idx) { return f.evaluate(domain.element_at(idx)); });
  return BoxSum(domain, std::move(table));
}

std::vector<TailEntry> along_entries(const FolnerSequence& F, const OrbitObservable& f, int dim,
                                     const EstimatorParams& p) {
  auto grid = estimator_grid(p);
  auto windows = grid_windows(F, grid, dim);
  BoxSum sums = build_table(hull_of(windows), f, p.threads);
  std::vector<TailEntry> entries;
  entries.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    TailEntry e;
    e.n = grid[i];
    e.window_volume = windows[i].volume();
    e.value = sums.sum(windows[i]) / double(e.window_volume);
    e.sup_translate = e.value;
    entries.push_back(e);
  }
  return entries;
}

struct BanachEntries {
  std::vector<TailEntry> entries;
  GroupElement argmax_last;
  bool interior = false;
};

BanachEntries banach_entries(const FolnerSequence& F, const OrbitObservable& f, int dim,
                             const EstimatorParams& p) {
  auto grid = estimator_grid(p);
  auto windows = grid_windows(F, grid, dim);
  const i64 radius = p.effective_radius();
  Window shifts = Window::cube(dim, -radius, radius + 1);
  BoxSum sums = build_table(hull_of(windows).minkowski(shifts), f, p.threads);
  auto hs = shifts.elements();
  BanachEntries out;
  out.argmax_last = GroupElement::zero(dim);
  for (size_t i = 0; i < grid.size(); ++i) {
    TailEntry e;
    e.n = grid[i];
    e.window_volume = windows[i].volume();
    double vol = double(e.window_volume);
    double best = -std::numeric_limits<double>::infinity();
    GroupElement best_h = GroupElement::zero(dim);
    for (const GroupElement& h : hs) {
      double v = sums.sum(windows[i].translated(h)) / vol;
      if (h.norm_inf() == 0) e.value = v;
      // Values within tol_abs of each other count as tied so that prefix-sum
      // rounding drift (constant observables sum to slightly different
      // figures per translate) cannot push the argmax to an arbitrary shift.
      bool take = v > best + p.tol_abs;
      if (!take && v >= best - p.tol_abs) {
        i64 nh = h.norm_inf(), nb = best_h.norm_inf();
        take = nh < nb || (nh == nb && h.c < best_h.c);
        if (take && v < best) v = best;
      }
      if (take) {
        best = v;
        best_h = h;
      }
    }
    e.sup_translate = best;
    out.entries.push_back(e);
    if (i + 1 == grid.size()) {
      out.argmax_last = best_h;
      out.interior = best_h.norm_inf() < radius;
    }
  }
  return out;
}

Estimate aggregate_along(std::vector<TailEntry> entries, const EstimatorParams& p,
                         std::string label, bool take_max) {
  Estimate est;
  est.mode = Mode::along_folner;
  est.tail = std::move(entries);
  est.search_radius = 0;
  est.label = std::move(label);
  size_t start = tail_start_index(est.tail.size(), p.tail_frac);
  double mx = -std::numeric_limits<double>::infinity();
  double mn = std::numeric_limits<double>::infinity();
  double mag = 0;
  for (size_t i = start; i < est.tail.size(); ++i) {
    double v = est.tail[i].value;
    mx = std::max(mx, v);
    mn = std::min(mn, v);
    mag = std::max(mag, std::abs(v));
  }
  est.value = take_max ? mx : mn;
  bool converged = (mx - mn) <= std::max(p.tol_abs, p.stab_rel * mag);
  // A tail that moves monotonically toward the limit still certifies the
  // reported value as a one-sided bound: non-increasing for an upper
  // estimate (the max sits at the head and dominates every later window),
  // non-decreasing for a lower one.
  bool monotone = est.tail.size() > start + 1;
  for (size_t i = start + 1; monotone && i < est.tail.size(); ++i) {
    double prev = est.tail[i - 1].value;
    double cur = est.tail[i].value;
    if (take_max ? cur > prev + p.tol_abs : cur < prev - p.tol_abs) monotone = false;
  }
  est.stabilized = converged || monotone;
  return est;
}

Estimate aggregate_banach(BanachEntries ev, const EstimatorParams& p, std::string label) {
  Estimate est;
  est.mode = Mode::banach_sup;
  est.tail = std::move(ev.entries);
  est.search_radius = p.effective_radius();
  est.label = std::move(label);
  est.value = est.tail.back().sup_translate;
  est.stabilized = ev.interior;
  return est;
}

OrbitObservable push_to_orbit(const Observable& f, const System& sys, const Point& x) {
  auto model = sys.model();
  auto eval = f.evaluate;
  return OrbitObservable{
      [model, eval, x](const GroupElement& g) { return eval(model->act(g, x)); }, f.bound,
      f.label};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double window_average(const Window& K, const Observable& f, const System& sys, const Point& x) {
  double total = 0;
  for (const GroupElement& g : K.elements()) total += f.evaluate(sys.act(g, x));
  return total / double(window_measure(K));
}

Window estimator_domain(const FolnerSequence& F, const EstimatorParams& p, int dim, Mode mode) {
  Window hull = hull_of(grid_windows(F, estimator_grid(p), dim));
  if (mode == Mode::banach_sup) {
    i64 r = p.effective_radius();
    hull = hull.minkowski(Window::cube(dim, -r, r + 1));
  }
  return hull;
}

bool tail_converged(const Estimate& est, const EstimatorParams& p) {
  if (est.mode == Mode::banach_sup) return est.stabilized;
  if (est.tail.empty()) return false;
  size_t start = tail_start_index(est.tail.size(), p.tail_frac);
  double mx = -std::numeric_limits<double>::infinity();
  double mn = std::numeric_limits<double>::infinity();
  double mag = 0;
  for (size_t i = start; i < est.tail.size(); ++i) {
    double v = est.tail[i].value;
    mx = std::max(mx, v);
    mn = std::min(mn, v);
    mag = std::max(mag, std::abs(v));
  }
  return (mx - mn) <= std::max(p.tol_abs, p.stab_rel * mag);
}

Estimate mean_along(const FolnerSequence& F, const Observable& f, const System& sys,
                    const Point& x, const EstimatorParams& p) {
  return orbit_mean_along(F, push_to_orbit(f, sys, x), sys.dimension(), p);
}

Estimate banach_mean(const FolnerSequence& F, const Observable& f, const System& sys,
                     const Point& x, const EstimatorParams& p) {
  return orbit_banach_mean(F, push_to_orbit(f, sys, x), sys.dimension(), p);
}

Estimate orbit_mean_along(const FolnerSequence& F, const OrbitObservable& f, int dim,
                          const EstimatorParams& p) {
  return aggregate_along(along_entries(F, f, dim, p), p, f.label + "|" + F.label, true);
}

Estimate orbit_banach_mean(const FolnerSequence& F, const OrbitObservable& f, int dim,
                           const EstimatorParams& p) {
  return aggregate_banach(banach_entries(F, f, dim, p), p, f.label + "|" + F.label);
}

DiamProfile diam_profile(const System& sys, const NetSet& A, const Window& domain,
                         const EstimatorParams& p) {
  if (A.points.empty()) throw std::invalid_argument("diam_profile: empty net");
  const SystemModel& m = sys.m();
  DiamProfile prof;
  prof.fn.bound = sys.diameter_bound();
  prof.fn.label = "diam";

  if (A.points.size() == 1 || m.isometric()) {
    double d0 = A.points.size() == 1 ? 0.0 : diam_set(A);
    prof.fn.evaluate = [d0](const GroupElement&) { return d0; };
    return prof;
  }

  if (m.symbolic() && sys.dimension() == 1) {
    i64 lo = domain.origin.c[0] - kSymbolHorizon;
    i64 hi = domain.end().c[0] - 1 + kSymbolHorizon;
    auto model = sys.model();
    auto disagreements = std::make_shared<std::vector<i64>>();
    for (i64 n = lo; n <= hi; ++n) {
      int s0 = m.symbol(A.points[0], n);
      for (size_t i = 1; i < A.points.size(); ++i)
        if (m.symbol(A.points[i], n) != s0) {
          disagreements->push_back(n);
          break;
        }
    }
    prof.fn.evaluate = [disagreements](const GroupElement& g) {
      i64 pos = g.c[0];
      i64 dist = kSymbolHorizon + 1;
      auto it = std::lower_bound(disagreements->begin(), disagreements->end(), pos);
      if (it != disagreements->end()) dist = std::min(dist, *it - pos);
      if (it != disagreements->begin()) dist = std::min(dist, pos - *(it - 1));
      if (dist > kSymbolHorizon) return 0.0;
      return std::ldexp(1.0, -int(dist));
    };
    return prof;
  }

  if (A.factors) {
    if (auto structure = dynamic_cast<const ProductStructure*>(&m)) {
      auto model = sys.model();
      auto subs = std::make_shared<std::vector<OrbitObservable>>();
      std::vector<double> gaps;
      const auto& factors = structure->product_factors();
      for (size_t i = 0; i < factors.size(); ++i) {
        DiamProfile sub = diam_profile(factors[i], (*A.factors)[i], domain, p);
        subs->push_back(sub.fn);
        gaps.push_back(sub.gap);
      }
      prof.gap = structure->combine(gaps);
      prof.fn.evaluate = [model, structure, subs](const GroupElement& g) {
        std::vector<double> per(subs->size());
        for (size_t i = 0; i < subs->size(); ++i) per[i] = (*subs)[i].evaluate(g);
        return structure->combine(per);
      };
      return prof;
    }
  }

  auto model = sys.model();
  auto points = std::make_shared<std::vector<Point>>(A.points);
  prof.fn.evaluate = [model, points](const GroupElement& g) {
    std::vector<Point> moved;
    moved.reserve(points->size());
    for (const Point& q : *points) moved.push_back(model->act(g, q));
    double best = 0;
    for (size_t i = 0; i < moved.size(); ++i)
      for (size_t j = i + 1; j < moved.size(); ++j)
        best = std::max(best, model->metric(moved[i], moved[j]));
    return best;
  };
  i64 range = 0;
  for (int i = 0; i < domain.dim(); ++i) {
    range = std::max(range, i64(std::llabs(domain.origin.c[size_t(i)])));
    range = std::max(range, i64(std::llabs(domain.end().c[size_t(i)] - 1)));
  }
  prof.gap = probe_modulus(sys, A, range);
  return prof;
}

Estimate mean_diameter_along(const FolnerSequence& F, const System& sys, const NetSet& A,
                             const EstimatorParams& p) {
  auto grid = estimator_grid(p);
  auto windows = grid_windows(F, grid, sys.dimension());
  DiamProfile prof = diam_profile(sys, A, hull_of(windows), p);
  Estimate est = aggregate_along(along_entries(F, prof.fn, sys.dimension(), p), p,
                                 "Diam_F|" + F.label, true);
  est.net_gap = prof.gap;
  return est;
}

Estimate mean_diameter(const FolnerSequence& F, const System& sys, const NetSet& A,
                       const EstimatorParams& p) {
  auto grid = estimator_grid(p);
  auto windows = grid_windows(F, grid, sys.dimension());
  Window shifts = Window::cube(sys.dimension(), -p.effective_radius(), p.effective_radius() + 1);
  DiamProfile prof = diam_profile(sys, A, hull_of(windows).minkowski(shifts), p);
  Estimate est =
      aggregate_banach(banach_entries(F, prof.fn, sys.dimension(), p), p, "Diam|" + F.label);
  est.net_gap = prof.gap;
  return est;
}

namespace {

NetSet pair_net(const System& sys, const Point& x, const Point& y) {
  NetSet a;
  a.points = canonical_points({x, y});
  a.mesh = 0;
  a.certified = false;
  a.model = sys.model();
  return a;
}

}  // namespace

Estimate weyl_distance(const FolnerSequence& F, const System& sys, const Point& x, const Point& y,
                       const EstimatorParams& p) {
  Estimate est = mean_diameter(F, sys, pair_net(sys, x, y), p);
  est.label = "weyl|" + F.label;
  return est;
}

Estimate besicovitch_distance(const FolnerSequence& F, const System& sys, const Point& x,
                              const Point& y, const EstimatorParams& p) {
  Estimate est = mean_diameter_along(F, sys, pair_net(sys, x, y), p);
  est.label = "besicovitch|" + F.label;
  return est;
}

std::pair<Estimate, Estimate> density_along(const FolnerSequence& F, const GroupPredicate& S,
                                            int dim, const EstimatorParams& p) {
  OrbitObservable indicator{[&S](const GroupElement& g) { return S(g) ? 1.0 : 0.0; }, 1.0,
                            "dens"};
  auto entries = along_entries(F, indicator, dim, p);
  Estimate upper = aggregate_along(entries, p, "ua-dens|" + F.label, true);
  Estimate lower = aggregate_along(std::move(entries), p, "la-dens|" + F.label, false);
  return {std::move(upper), std::move(lower)};
}

Estimate upper_banach_density(const FolnerSequence& F, const GroupPredicate& S, int dim,
                              const EstimatorParams& p) {
  OrbitObservable indicator{[&S](const GroupElement& g) { return S(g) ? 1.0 : 0.0; }, 1.0,
                            "dens"};
  return aggregate_banach(banach_entries(F, indicator, dim, p), p, "ub-dens|" + F.label);
}

DensityReport density_report(const FolnerSequence& F, const GroupPredicate& S, int dim,
                             const EstimatorParams& p, std::string set_label) {
  DensityReport r;
  auto [upper, lower] = density_along(F, S, dim, p);
  r.upper_along = std::move(upper);
  r.lower_along = std::move(lower);
  r.upper_banach = upper_banach_density(F, S, dim, p);
  r.set_label = std::move(set_label);
  return r;
}

Verdict check_S_property(const std::function<double(const GroupElement&)>& f, const Window& K,
                         const Window& Kp, double tol) {
  Verdict v;
  v.check = "S_property";
  v.params = "K=" + K.str() + ";K'=" + Kp.str();
  v.tolerance = tol;
  auto H = [&f](const Window& w) {
    double s = 0;
    for (const GroupElement& g : w.elements()) s += f(g);
    return s;
  };
  v.lhs = H(Kp);
  double rhs = 0;
  for (const GroupElement& g : inv_product(K, Kp).elements()) rhs += H(K.translated(g));
  v.rhs = rhs / double(window_measure(K));
  v.outcome = v.lhs <= v.rhs + tol ? Outcome::holds : Outcome::fails;
  return v;
}

Verdict check_majorizing_transfer(const FolnerSequence& F, const Observable& f,
                                  const Observable& h, const System& sys, double eps,
                                  double delta_prime, const NetSet& points,
                                  const EstimatorParams& p) {
  if (h.bound > 1.0 + 1e-12)
    throw std::invalid_argument(
        "check_majorizing_transfer: normalize h to sup-norm bound at most 1");
  Verdict v;
  v.check = "majorizing_transfer";
  v.params = "eps=" + fmt(eps) + ";delta'=" + fmt(delta_prime) + ";n_max=" +
             std::to_string(p.n_max) + ";F=" + F.label;
  v.tolerance = p.tol_abs;
  for (const Point& q : points.points) {
    double fv = f.evaluate(q);
    double hv = h.evaluate(q);
    if (fv <= delta_prime && hv > eps / 2 + p.tol_abs) {
      v.outcome = Outcome::fails;
      v.lhs = hv;
      v.rhs = eps / 2;
      v.notes.push_back("precondition violated: f is not (eps/2)-delta'-majorizing for h");
      return v;
    }
  }
  const double delta = eps * delta_prime / 4.0;
  bool any = false;
  bool all_stabilized = true;
  double worst = 0;
  for (const Point& q : points.points) {
    Estimate ef = mean_along(F, f, sys, q, p);
    if (!(ef.value <= delta)) continue;
    Estimate eh = mean_along(F, h, sys, q, p);
    any = true;
    all_stabilized = all_stabilized && ef.stabilized && eh.stabilized;
    worst = std::max(worst, eh.value);
    if (eh.value > eps + p.tol_abs) {
      v.lhs = eh.value;
      v.rhs = eps;
      if (ef.stabilized && eh.stabilized) {
        v.outcome = Outcome::fails;
        v.notes.push_back("conclusion violated at a sampled point");
      } else {
        v.outcome = Outcome::inconclusive;
        v.notes.push_back("violation observed but estimates not stabilized");
      }
      return v;
    }
  }
  v.lhs = worst;
  v.rhs = eps;
  if (!any) {
    v.outcome = Outcome::holds;
    v.notes.push_back("vacuous: no sampled point reached the f-average threshold");
  } else if (all_stabilized) {
    v.outcome = Outcome::holds;
  } else {
    v.outcome = Outcome::inconclusive;
    v.notes.push_back("estimates not stabilized");
  }
  return v;
}

Verdict check_density_estimates(const FolnerSequence& F, const Observable& f, const System& sys,
                                const Point& x, double eps, const EstimatorParams& p) {
  Verdict v;
  v.check = "density_estimates";
  v.params = "eps=" + fmt(eps) + ";n_max=" + std::to_string(p.n_max) + ";F=" + F.label;
  v.tolerance = p.tol_abs;
  const int dim = sys.dimension();
  OrbitObservable fo = [&] {
    auto model = sys.model();
    auto eval = f.evaluate;
    return OrbitObservable{[model, eval, x](const GroupElement& g) { return eval(model->act(g, x)); },
                           f.bound, f.label};
  }();
  Estimate along = orbit_mean_along(F, fo, dim, p);
  Estimate ban = orbit_banach_mean(F, fo, dim, p);
  GroupPredicate S = [&fo, eps](const GroupElement& g) { return fo.evaluate(g) > eps; };
  auto [ua, la] = density_along(F, S, dim, p);
  (void)la;
  Estimate ub = upper_banach_density(F, S, dim, p);

  struct Step {
    const char* name;
    bool applicable;
    double lhs;
    double rhs;
    bool stabilized;
  };
  const double grow = (f.bound + 1.0) * eps;
  Step steps[4] = {
      {"(i)", along.value <= eps * eps, ua.value, eps, along.stabilized && ua.stabilized},
      {"(ii)", ua.value <= eps, along.value, grow, along.stabilized && ua.stabilized},
      {"(iii)", ban.value <= eps * eps, ub.value, eps, ban.stabilized && ub.stabilized},
      {"(iv)", ub.value <= eps, ban.value, grow, ban.stabilized && ub.stabilized},
  };
  bool any_applicable = false;
  bool all_ok = true;
  bool all_stabilized = true;
  double best_margin = std::numeric_limits<double>::infinity();
  for (const Step& s : steps) {
    if (!s.applicable) {
      v.notes.push_back(std::string(s.name) + " vacuous");
      continue;
    }
    any_applicable = true;
    bool ok = s.lhs <= s.rhs + p.tol_abs;
    double margin = s.rhs + p.tol_abs - s.lhs;
    if (margin < best_margin) {
      best_margin = margin;
      v.lhs = s.lhs;
      v.rhs = s.rhs;
    }
    all_ok = all_ok && ok;
    all_stabilized = all_stabilized && s.stabilized;
    v.notes.push_back(std::string(s.name) + (ok ? " holds" : " violated"));
  }
  if (!any_applicable) {
    v.outcome = Outcome::holds;
    v.notes.push_back("all implications vacuous");
  } else if (!all_ok) {
    v.outcome = all_stabilized ? Outcome::fails : Outcome::inconclusive;
  } else {
    v.outcome = all_stabilized ? Outcome::holds : Outcome::inconclusive;
  }
  return v;
}

}  // namespace meandiam
