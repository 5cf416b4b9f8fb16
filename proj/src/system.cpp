#include "meandiam/system.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace meandiam {

NetSet System::net(double mesh) const {
  if (!(mesh > 0)) throw std::invalid_argument("net: mesh must be positive");
  if (auto structured = model_->net_set(mesh)) {
    structured->points = canonical_points(std::move(structured->points));
    structured->mesh = mesh;
    structured->certified = true;
    structured->model = model_;
    return *structured;
  }
  NetSet n;
  n.points = canonical_points(model_->net_points(mesh));
  n.mesh = mesh;
  n.certified = true;
  n.model = model_;
  return n;
}

std::vector<Point> canonical_points(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), point_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace {

void require_model(const NetSet& a, const char* what) {
  if (!a.model) throw std::invalid_argument(std::string(what) + ": net without system");
  if (a.points.empty()) throw std::invalid_argument(std::string(what) + ": empty net");
}

}  // namespace

double diam_set(const NetSet& a) {
  require_model(a, "diam_set");
  const SystemModel& m = *a.model;
  double d = 0;
  for (size_t i = 0; i < a.points.size(); ++i)
    for (size_t j = i + 1; j < a.points.size(); ++j)
      d = std::max(d, m.metric(a.points[i], a.points[j]));
  return d;
}

double hausdorff_points(const SystemModel& m, const std::vector<Point>& a,
                        const std::vector<Point>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("hausdorff_points: empty point list");
  double h = 0;
  auto one_sided = [&m, &h](const std::vector<Point>& from, const std::vector<Point>& to) {
    for (const Point& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& q : to) best = std::min(best, m.metric(p, q));
      h = std::max(h, best);
    }
  };
  one_sided(a, b);
  one_sided(b, a);
  return h;
}

double hausdorff(const NetSet& a, const NetSet& b) {
  require_model(a, "hausdorff");
  require_model(b, "hausdorff");
  if (a.model.get() != b.model.get())
    throw std::invalid_argument("hausdorff: nets belong to different systems");
  return hausdorff_points(*a.model, a.points, b.points);
}

NetSet act_set(const GroupElement& g, const NetSet& a) {
  require_model(a, "act_set");
  NetSet out;
  out.points.reserve(a.points.size());
  for (const Point& p : a.points) out.points.push_back(a.model->act(g, p));
  out.mesh = a.mesh;
  out.certified = false;
  out.model = a.model;
  if (a.factors) {
    auto moved = std::make_shared<std::vector<NetSet>>();
    moved->reserve(a.factors->size());
    for (const NetSet& f : *a.factors) moved->push_back(act_set(g, f));
    out.factors = moved;
  }
  return out;
}

NetSet ball_net(const System& sys, const Point& x, double delta, double mesh) {
  if (!(mesh > 0) || !(delta > 0)) throw std::invalid_argument("ball_net: need positive radii");
  if (mesh > delta) throw std::invalid_argument("ball_net: mesh must be <= delta");
  if (auto structured = sys.m().ball_set(x, delta, mesh)) {
    structured->points.push_back(x);
    structured->points = canonical_points(std::move(structured->points));
    structured->mesh = mesh;
    structured->certified = true;
    structured->model = sys.model();
    return *structured;
  }
  NetSet out;
  out.mesh = mesh;
  out.certified = true;
  out.model = sys.model();
  if (auto fast = sys.m().ball_points(x, delta, mesh)) {
    out.points = std::move(*fast);
  } else {
    for (Point& p : sys.m().net_points(mesh))
      if (sys.metric(p, x) <= delta) out.points.push_back(std::move(p));
  }
  out.points.push_back(x);
  out.points = canonical_points(std::move(out.points));
  return out;
}

double probe_modulus(const System& sys, const NetSet& a, i64 range, int samples) {
  if (a.points.size() < 2 || range <= 0) return 0;
  std::mt19937_64 rng(12345);
  const int d = sys.dimension();
  double gap = 0;
  std::uniform_int_distribution<size_t> pick(0, a.points.size() - 1);
  std::uniform_int_distribution<i64> shift(-range, range);
  for (int s = 0; s < samples; ++s) {
    size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (sys.metric(a.points[i], a.points[j]) > 2 * a.mesh) continue;
    GroupElement g = GroupElement::zero(d);
    for (int t = 0; t < d; ++t) g.c[size_t(t)] = shift(rng);
    gap = std::max(gap, sys.metric(sys.act(g, a.points[i]), sys.act(g, a.points[j])));
  }
  return gap;
}

double symbolic_metric(const SystemModel& m, const Point& a, const Point& b) {
  for (i64 n = 0; n <= kSymbolHorizon; ++n) {
    if (m.symbol(a, n) != m.symbol(b, n)) return std::ldexp(1.0, -int(n));
    if (n > 0 && m.symbol(a, -n) != m.symbol(b, -n)) return std::ldexp(1.0, -int(n));
  }
  return 0.0;
}

void validate_system(const System& sys, double mesh, unsigned seed) {
  NetSet net = sys.net(mesh);
  if (net.points.empty()) throw std::logic_error("validate_system: empty net");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, net.points.size() - 1);
  std::uniform_int_distribution<i64> shift(-8, 8);
  const int d = sys.dimension();
  const double bound = sys.diameter_bound();
  auto rand_g = [&] {
    GroupElement g = GroupElement::zero(d);
    for (int t = 0; t < d; ++t) g.c[size_t(t)] = shift(rng);
    return g;
  };
  for (int s = 0; s < 64; ++s) {
    const Point& x = net.points[pick(rng)];
    const Point& y = net.points[pick(rng)];
    const Point& z = net.points[pick(rng)];
    double dxy = sys.metric(x, y);
    if (dxy < 0 || dxy > bound + 1e-12) throw std::logic_error("validate_system: metric bound");
    if (std::abs(dxy - sys.metric(y, x)) > 1e-15) throw std::logic_error("validate_system: symmetry");
    if (sys.metric(x, x) != 0) throw std::logic_error("validate_system: d(x,x) != 0");
    if (dxy > sys.metric(x, z) + sys.metric(z, y) + 1e-12)
      throw std::logic_error("validate_system: triangle inequality");
    GroupElement g = rand_g(), h = rand_g();
    if (!(sys.act(GroupElement::zero(d), x) == x))
      throw std::logic_error("validate_system: act(0) != id");
    if (!(sys.act(g, sys.act(h, x)) == sys.act(g + h, x)))
      throw std::logic_error("validate_system: group law");
  }
}

}  // namespace meandiam
