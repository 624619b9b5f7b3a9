#pragma once

#include <optional>
#include <vector>

#include "plrkit/metric_space.hpp"

namespace plrkit {

/// A compact convex subset of R^n kept as conv(generators) + radius * B, or empty.
/// Singletons, polytopes, balls and their Minkowski sums all fit this form.
class ConvexSet {
 public:
  static ConvexSet empty(int dim);
  static ConvexSet singleton(Vector v);
  static ConvexSet polytope(std::vector<Vector> vertices);
  static ConvexSet ball(Vector center, double radius);

  int dim() const noexcept { return dim_; }
  bool is_empty() const noexcept { return generators_.empty(); }
  const std::vector<Vector>& generators() const noexcept { return generators_; }
  double radius() const noexcept { return radius_; }

  /// sup over the set of <p, u>; -inf for the empty set.
  double support(const Vector& u) const;

  /// A point of the set maximizing <p, u> (u != 0). Lies on the boundary.
  Vector support_point(const Vector& u) const;

  /// Euclidean distance from q to the set (+inf when empty).
  double distance_to(const Vector& q) const;
  bool contains(const Vector& q, double tol = 1e-9) const { return distance_to(q) <= tol; }

  ConvexSet operator+(const ConvexSet& other) const;
  ConvexSet scaled(double r) const;  // any real r, including negative
  ConvexSet translated(const Vector& v) const;

 private:
  ConvexSet(int dim, std::vector<Vector> gens, double radius);

  int dim_ = 0;
  std::vector<Vector> generators_;
  double radius_ = 0.0;
};

inline constexpr double kMinNormTolerance = 1e-9;

/// Nearest point to the origin in a polytope conv(points).
/// Exact active-set enumeration for at most 8 points in dimension <= 4, Wolfe's method otherwise.
Vector min_norm_polytope(const std::vector<Vector>& points);

/// Wolfe's min-norm-point iteration; exposed for cross-checking the exact path.
Vector min_norm_wolfe(const std::vector<Vector>& points, double tol = kMinNormTolerance);

/// Enumerates affinely independent subsets; exposed for cross-checking.
Vector min_norm_exact(const std::vector<Vector>& points);

/// Nearest point to the origin in S; nullopt iff S is empty.
std::optional<Vector> min_norm_element(const ConvexSet& s);

}  // namespace plrkit
