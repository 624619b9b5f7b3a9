#include "plrkit/convex_set.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <bit>
#include <cstdint>
#include <limits>

#include "plrkit/errors.hpp"

namespace plrkit {

namespace {

void dedupe(std::vector<Vector>& pts) {
  std::vector<Vector> out;
  for (auto& p : pts) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Vector& q) { return (q - p).norm() == 0.0; });
    if (!seen) out.push_back(std::move(p));
  }
  pts = std::move(out);
}

// Affine minimizer of |sum l_i p_i| subject to sum l_i = 1; false if the
// system is singular.
bool affine_min(const std::vector<const Vector*>& pts, Eigen::VectorXd& lambda) {
  const auto k = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) kkt(i, j) = pts[i]->dot(*pts[j]);
    kkt(i, k) = 1.0;
    kkt(k, i) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return false;
  const Eigen::VectorXd sol = lu.solve(rhs);
  lambda = sol.head(k);
  return lambda.allFinite();
}

}  // namespace

ConvexSet::ConvexSet(int dim, std::vector<Vector> gens, double radius)
    : dim_(dim), generators_(std::move(gens)), radius_(radius) {
  if (!(radius_ >= 0.0) || !std::isfinite(radius_)) throw InputError("convex set: radius must be finite and >= 0");
  for (const auto& g : generators_) {
    if (g.size() != dim_) throw InputError("convex set: generator has wrong dimension");
  }
  dedupe(generators_);
}

ConvexSet ConvexSet::empty(int dim) { return ConvexSet(dim, {}, 0.0); }

ConvexSet ConvexSet::singleton(Vector v) {
  const int dim = static_cast<int>(v.size());
  return ConvexSet(dim, {std::move(v)}, 0.0);
}

ConvexSet ConvexSet::polytope(std::vector<Vector> vertices) {
  if (vertices.empty()) throw InputError("convex set: vertex list must be nonempty");
  const int dim = static_cast<int>(vertices.front().size());
  return ConvexSet(dim, std::move(vertices), 0.0);
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  const int dim = static_cast<int>(center.size());
  return ConvexSet(dim, {std::move(center)}, radius);
}

double ConvexSet::support(const Vector& u) const {
  if (is_empty()) return -std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : generators_) best = std::max(best, g.dot(u));
  return best + radius_ * u.norm();
}

Vector ConvexSet::support_point(const Vector& u) const {
  if (is_empty()) throw InputError("support_point of an empty set");
  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const double v = generators_[i].dot(u);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  const double n = u.norm();
  if (n == 0.0 || radius_ == 0.0) return generators_[arg];
  return generators_[arg] + (radius_ / n) * u;
}

double ConvexSet::distance_to(const Vector& q) const {
  if (is_empty()) return std::numeric_limits<double>::infinity();
  auto p = min_norm_element(translated(-q));
  return p->norm();
}

ConvexSet ConvexSet::operator+(const ConvexSet& other) const {
  if (other.dim_ != dim_) throw InputError("Minkowski sum of sets in different dimensions");
  if (is_empty() || other.is_empty()) return empty(dim_);
  std::vector<Vector> gens;
  gens.reserve(generators_.size() * other.generators_.size());
  for (const auto& a : generators_) {
    for (const auto& b : other.generators_) gens.push_back(a + b);
  }
  return ConvexSet(dim_, std::move(gens), radius_ + other.radius_);
}

ConvexSet ConvexSet::scaled(double r) const {
  std::vector<Vector> gens;
  for (const auto& g : generators_) gens.push_back(r * g);
  return ConvexSet(dim_, std::move(gens), std::fabs(r) * radius_);
}

ConvexSet ConvexSet::translated(const Vector& v) const {
  std::vector<Vector> gens;
  for (const auto& g : generators_) gens.push_back(g + v);
  return ConvexSet(dim_, std::move(gens), radius_);
}

Vector min_norm_exact(const std::vector<Vector>& points) {
  if (points.empty()) throw InputError("min_norm_exact: no points");
  const std::size_t m = points.size();
  if (m > 16) throw InputError("min_norm_exact: too many points for enumeration");
  const auto dim = static_cast<std::size_t>(points.front().size());
  const std::size_t max_k = std::min(m, dim + 1);

  Vector best = points.front();
  double best_sq = best.squaredNorm();
  std::vector<const Vector*> subset;
  Eigen::VectorXd lambda;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k > max_k) continue;
    subset.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) subset.push_back(&points[i]);
    }
    if (k == 1) {
      const double sq = subset[0]->squaredNorm();
      if (sq < best_sq) {
        best_sq = sq;
        best = *subset[0];
      }
      continue;
    }
    if (!affine_min(subset, lambda)) continue;
    if (lambda.minCoeff() < -1e-12) continue;
    Vector p = Vector::Zero(static_cast<Eigen::Index>(dim));
    const double total = lambda.sum();
    for (std::size_t i = 0; i < k; ++i) p += (std::max(0.0, lambda[static_cast<Eigen::Index>(i)]) / total) * *subset[i];
    const double sq = p.squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      best = p;
    }
  }
  return best;
}

Vector min_norm_wolfe(const std::vector<Vector>& points, double tol) {
  if (points.empty()) throw InputError("min_norm_wolfe: no points");
  const std::size_t m = points.size();
  std::size_t start = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (points[i].squaredNorm() < points[start].squaredNorm()) start = i;
  }
  std::vector<std::size_t> active{start};
  std::vector<double> weight{1.0};
  Vector x = points[start];
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, p.squaredNorm());
  scale = std::max(scale, 1.0);

  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double v = x.dot(points[i]);
      if (v < lowest) {
        lowest = v;
        j = i;
      }
    }
    if (x.squaredNorm() - lowest <= tol * scale) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    weight.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      std::vector<const Vector*> pts;
      for (auto i : active) pts.push_back(&points[i]);
      Eigen::VectorXd v;
      if (!affine_min(pts, v)) {
        // Degenerate corral: drop the newest point and stop improving.
        active.pop_back();
        weight.pop_back();
        break;
      }
      bool interior = true;
      for (Eigen::Index i = 0; i < v.size(); ++i) interior = interior && v[i] > 1e-14;
      if (interior) {
        for (std::size_t i = 0; i < active.size(); ++i) weight[i] = v[static_cast<Eigen::Index>(i)];
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        const double vi = v[static_cast<Eigen::Index>(i)];
        if (vi <= 1e-14) {
          const double denom = weight[i] - vi;
          if (denom > 0.0) theta = std::min(theta, weight[i] / denom);
        }
      }
      std::vector<std::size_t> next_active;
      std::vector<double> next_weight;
      for (std::size_t i = 0; i < active.size(); ++i) {
        const double w = theta * v[static_cast<Eigen::Index>(i)] + (1.0 - theta) * weight[i];
        if (w > 1e-14) {
          next_active.push_back(active[i]);
          next_weight.push_back(w);
        }
      }
      if (next_active.empty()) {
        next_active.push_back(active.front());
        next_weight.push_back(1.0);
      }
      active = std::move(next_active);
      weight = std::move(next_weight);
    }
    double total = 0.0;
    for (double w : weight) total += w;
    x = Vector::Zero(points.front().size());
    for (std::size_t i = 0; i < active.size(); ++i) x += (weight[i] / total) * points[active[i]];
  }
  return x;
}

Vector min_norm_polytope(const std::vector<Vector>& points) {
  if (points.size() <= 8 && !points.empty() && points.front().size() <= 4) return min_norm_exact(points);
  return min_norm_wolfe(points);
}

std::optional<Vector> min_norm_element(const ConvexSet& s) {
  if (s.is_empty()) return std::nullopt;
  Vector p = min_norm_polytope(s.generators());
  const double n = p.norm();
  if (n <= s.radius()) return Vector::Zero(s.dim());
  if (s.radius() == 0.0) return p;
  return p * (1.0 - s.radius() / n);
}

}  // namespace plrkit
