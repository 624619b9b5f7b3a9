#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace plrkit {

using Vector = Eigen::VectorXd;
using PointIndex = std::size_t;

enum class BallKind { closed, open };

/// A finite metric space with points addressed by index 0..size()-1.
/// Implementations are immutable after construction.
class MetricSpace {
 public:
  virtual ~MetricSpace() = default;

  virtual std::size_t size() const = 0;
  virtual double distance(PointIndex a, PointIndex b) const = 0;

  /// Fills out[j] = d(a, j) for every point; out.size() must equal size().
  virtual void distances_from(PointIndex a, std::span<double> out) const = 0;

  /// Points y with d(y, x) <= r (closed) or < r (open), in increasing index order.
  virtual std::vector<PointIndex> ball(PointIndex x, double r, BallKind kind = BallKind::closed) const;

  virtual std::string label(PointIndex i) const = 0;

  /// The induced metric subspace on `keep` (strictly increasing indices).
  virtual std::shared_ptr<const MetricSpace> restrict_to(std::span<const PointIndex> keep) const = 0;

  /// Throws InputError for an unknown point index.
  void check_index(PointIndex i) const;

  /// Looks a point up by label; nullopt when absent.
  std::optional<PointIndex> find(const std::string& label) const;

  /// Largest pairwise distance (0 for spaces with fewer than two points).
  double diameter() const;
};

/// Explicit point ids with a dense symmetric distance matrix.
class FiniteMetricSpace final : public MetricSpace {
 public:
  /// Validates symmetry, zero diagonal, positivity off the diagonal and the
  /// triangle inequality (slack `tolerance`); throws InputError otherwise.
  FiniteMetricSpace(std::vector<std::string> ids, std::vector<double> dist_row_major,
                    double tolerance = 1e-12);

  /// Unit-spaced path 0 - 1 - ... - (n-1) with ids "0", "1", ...
  static FiniteMetricSpace path(std::size_t n, double step = 1.0);

  std::size_t size() const override { return ids_.size(); }
  double distance(PointIndex a, PointIndex b) const override { return dist_[a * ids_.size() + b]; }
  void distances_from(PointIndex a, std::span<double> out) const override;
  std::string label(PointIndex i) const override { return ids_.at(i); }
  std::shared_ptr<const MetricSpace> restrict_to(std::span<const PointIndex> keep) const override;

  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  struct Unchecked {};
  FiniteMetricSpace(Unchecked, std::vector<std::string> ids, std::vector<double> dist);

  std::vector<std::string> ids_;
  std::vector<double> dist_;
};

/// Axis-aligned lattice center + h * Z^dim intersected with the closed ball
/// B(center; radius), Euclidean distance. Restrictions keep the lattice frame.
struct GridSpec {
  int dim = 1;
  Vector center;
  double radius = 1.0;
  double h = 0.1;
};

class EuclideanGrid final : public MetricSpace {
 public:
  explicit EuclideanGrid(GridSpec spec);

  std::size_t size() const override { return count_; }
  double distance(PointIndex a, PointIndex b) const override;
  void distances_from(PointIndex a, std::span<double> out) const override;
  std::vector<PointIndex> ball(PointIndex x, double r, BallKind kind = BallKind::closed) const override;
  std::string label(PointIndex i) const override;
  std::shared_ptr<const MetricSpace> restrict_to(std::span<const PointIndex> keep) const override;

  const GridSpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return spec_.dim; }
  double spacing() const noexcept { return spec_.h; }

  Vector point(PointIndex i) const;
  std::span<const double> coordinate(int k) const { return coords_[static_cast<std::size_t>(k)]; }

  /// Distances from an arbitrary location (not necessarily a grid point).
  void distances_to(const Vector& q, std::span<double> out) const;

  /// Member point nearest to q (lowest index on ties).
  PointIndex nearest(const Vector& q) const;

  /// Index of the member whose coordinates equal q within 1e-9 * h, if any.
  std::optional<PointIndex> locate(const Vector& q) const;

 private:
  struct Restricted {};
  EuclideanGrid(Restricted, const EuclideanGrid& parent, std::span<const PointIndex> keep);

  void build_lookup();
  std::optional<PointIndex> lookup(const std::int32_t* key) const;
  std::vector<const double*> coordinate_pointers() const;

  GridSpec spec_;
  std::size_t count_ = 0;
  std::int32_t extent_ = 0;               // lattice coordinates lie in [-extent_, extent_]
  std::vector<std::int32_t> lattice_;     // count_ x dim, row-major
  std::vector<std::vector<double>> coords_;  // dim arrays of length count_
  std::vector<std::int32_t> dense_lookup_;   // (2 extent + 1)^dim -> index or -1
  std::unordered_map<std::uint64_t, PointIndex> sparse_lookup_;
};

/// Grid points of spacing h anchored at `center` that lie in the open ball B°(center; radius).
std::shared_ptr<const EuclideanGrid> open_ball_grid(const Vector& center, double radius, double h);

}  // namespace plrkit
