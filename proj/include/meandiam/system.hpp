#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "meandiam/group.hpp"
#include "meandiam/point.hpp"

namespace meandiam {

class SystemModel;

/// Finite list of points standing in for a compact subset. `mesh` is the
/// guaranteed covering radius when `certified` is true; images under the
/// group action keep the points exact but lose the covering certificate.
struct NetSet {
  std::vector<Point> points;
  double mesh = 0.0;
  bool certified = false;
  std::shared_ptr<const SystemModel> model;
  /// Set when the list is a full cartesian product of factor nets, so
  /// product systems can split diameters factorwise.
  std::shared_ptr<const std::vector<NetSet>> factors;

  size_t size() const { return points.size(); }
};

/// A compact metric space with a Z^d action. Implementations are immutable
/// and shared; all evaluation is exact-arithmetic where the payload allows.
class SystemModel : public std::enable_shared_from_this<SystemModel> {
 public:
  virtual ~SystemModel() = default;

  virtual int dimension() const { return 1; }
  virtual double metric(const Point& a, const Point& b) const = 0;
  virtual Point act(const GroupElement& g, const Point& x) const = 0;
  virtual std::vector<Point> net_points(double mesh) const = 0;
  virtual double diameter_bound() const = 0;
  virtual std::string label() const = 0;

  /// True when the payload arithmetic is exact (drives default tolerances).
  virtual bool exact() const { return true; }
  /// True when the action preserves the metric.
  virtual bool isometric() const { return false; }

  /// Shift systems over a finite alphabet expose per-position symbols; the
  /// metric is then 2^-(first disagreement) and translated diameters reduce
  /// to nearest-disagreement sweeps.
  virtual bool symbolic() const { return false; }
  virtual int symbol(const Point&, i64) const { return -1; }
  virtual int alphabet_size() const { return 0; }

  /// Points worth including in every sample (fixed points, origins).
  virtual std::vector<Point> distinguished_points() const { return {}; }

  /// Optional closed-form ball enumeration; nullopt falls back to filtering
  /// the mesh net.
  virtual std::optional<std::vector<Point>> ball_points(const Point&, double, double) const {
    return std::nullopt;
  }

  /// Net resolution that makes a sampled delta-ball faithful for mean
  /// estimates. The default quarter-radius mesh suits spaces whose close
  /// pairs stay close in the mean. Low-complexity word systems override it
  /// to a window-doubling scale (mesh ~ delta^2): there the pairs carrying
  /// the surviving mean mass first disagree well outside the radius-defining
  /// window, yet the net stays small because the number of distinct windows
  /// grows only linearly with the window length.
  virtual double ball_resolution(double delta) const { return delta / 4; }

  /// Structured variants that can attach factor structure to the result
  /// (product systems). Defaults defer to net_points / ball_points.
  virtual std::optional<NetSet> net_set(double) const { return std::nullopt; }
  virtual std::optional<NetSet> ball_set(const Point&, double, double) const {
    return std::nullopt;
  }

  /// Optional substitute pool for seeded base-point sampling when the full
  /// mesh net would be too large to enumerate (product systems, whose factor
  /// nets multiply). Entries need not form a net; they only need to spread
  /// across the space deterministically for the given seed.
  virtual std::optional<std::vector<Point>> sample_pool(double, int, unsigned) const {
    return std::nullopt;
  }
};

/// Value handle for a shared immutable SystemModel.
class System {
 public:
  System() = default;
  explicit System(std::shared_ptr<const SystemModel> m) : model_(std::move(m)) {}

  const SystemModel& m() const { return *model_; }
  const std::shared_ptr<const SystemModel>& model() const { return model_; }
  bool valid() const { return model_ != nullptr; }

  int dimension() const { return model_->dimension(); }
  double metric(const Point& a, const Point& b) const { return model_->metric(a, b); }
  Point act(const GroupElement& g, const Point& x) const { return model_->act(g, x); }
  double diameter_bound() const { return model_->diameter_bound(); }
  std::string label() const { return model_->label(); }
  bool exact() const { return model_->exact(); }
  double ball_resolution(double delta) const { return model_->ball_resolution(delta); }

  /// Certified mesh net as a NetSet.
  NetSet net(double mesh) const;

 private:
  std::shared_ptr<const SystemModel> model_;
};

/// Max pairwise distance over the listed points (exact over the list).
double diam_set(const NetSet& a);

/// Discrete Hausdorff distance between two point lists of the same system.
double hausdorff(const NetSet& a, const NetSet& b);

/// Hausdorff distance between raw point lists under an explicit metric owner.
double hausdorff_points(const SystemModel& m, const std::vector<Point>& a,
                        const std::vector<Point>& b);

/// Pointwise translate; the result keeps `mesh` as metadata but is tagged
/// certified=false because the action need not preserve covering radii.
NetSet act_set(const GroupElement& g, const NetSet& a);

/// Points of net(mesh) within delta of x, plus x itself. Requires mesh <= delta.
NetSet ball_net(const System& sys, const Point& x, double delta, double mesh);

/// Probed modulus of continuity of the action: max over sampled mesh-close
/// net pairs and sampled translates in [-range, range]^d of the translated
/// pair distance. Reported alongside uncertified-net estimates.
double probe_modulus(const System& sys, const NetSet& a, i64 range, int samples = 24);

/// First-disagreement metric shared by the symbolic systems. Scans |n| up to
/// the resolution horizon (beyond which 2^-n underflows to 0).
double symbolic_metric(const SystemModel& m, const Point& a, const Point& b);

inline constexpr i64 kSymbolHorizon = 1100;

/// Sorted, deduplicated copy (canonical order for deterministic output).
std::vector<Point> canonical_points(std::vector<Point> pts);

/// Construction-time sanity sweep: metric axioms and action consistency
/// spot-checked on net samples. Throws std::logic_error on violation.
void validate_system(const System& sys, double mesh, unsigned seed = 1);

}  // namespace meandiam
