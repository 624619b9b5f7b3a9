#pragma once

// Hand-rolled generators and small independent oracles shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "plrkit/field.hpp"
#include "plrkit/metric_space.hpp"
#include "plrkit/subdifferential.hpp"

namespace plrkit::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Vector vector(int dim, double lo, double hi) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vector in_ball(const Vector& center, double r) {
    Vector u(center.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal();
    const double radius = r * std::pow(uniform(0.0, 1.0), 1.0 / static_cast<double>(center.size()));
    return center + radius * u / std::max(u.norm(), 1e-300);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Metric from random points in R^k (Euclidean) or from shortest paths of a random weighted graph.
inline std::shared_ptr<const FiniteMetricSpace> random_finite_space(Gen& gen, std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  std::vector<double> dist(n * n, 0.0);
  if (gen.coin()) {
    const int k = gen.integer(1, 3);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(gen.vector(k, -1.0, 1.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = i == j ? 0.0 : (pts[i] - pts[j]).norm() + 1e-6;
  } else {
    const double big = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = i == j ? 0.0 : big;
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t j = gen.index(i);
      const double w = gen.uniform(0.1, 2.0);
      dist[i * n + j] = dist[j * n + i] = w;
    }
    for (std::size_t e = 0; e < n; ++e) {
      const std::size_t i = gen.index(n), j = gen.index(n);
      if (i == j) continue;
      const double w = gen.uniform(0.1, 2.0);
      dist[i * n + j] = dist[j * n + i] = std::min(dist[i * n + j], w);
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::min(dist[i * n + j], dist[i * n + k] + dist[k * n + j]);
  }
  return std::make_shared<FiniteMetricSpace>(ids, dist);
}

/// Random values in [lo, hi], about a fifth of them +inf but never all.
inline ScalarField random_field(Gen& gen, std::shared_ptr<const MetricSpace> space, bool allow_inf = true) {
  const std::size_t n = space->size();
  std::vector<ExtReal> values;
  for (std::size_t i = 0; i < n; ++i) {
    if (allow_inf && gen.coin(0.2)) {
      values.push_back(ExtReal::infinity());
    } else {
      values.push_back(gen.coin(0.1) ? std::round(gen.uniform(-3.0, 3.0)) : gen.uniform(-3.0, 3.0));
    }
  }
  values[gen.index(n)] = gen.uniform(-3.0, 3.0);
  return ScalarField(std::move(space), std::move(values));
}

inline std::shared_ptr<const EuclideanGrid> grid(int dim, double radius, double h, Vector center = {}) {
  if (center.size() == 0) center = Vector::Zero(dim);
  return std::make_shared<EuclideanGrid>(GridSpec{dim, center, radius, h});
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Brute-force slope oracle written independently of the kernels.
inline double brute_slope(const ScalarField& f, PointIndex x, double eps) {
  const auto& space = f.space();
  double best = 0.0;
  for (PointIndex y = 0; y < space.size(); ++y) {
    if (y == x || !f.finite(y)) continue;
    const double d = space.distance(x, y);
    if (d > eps) continue;
    best = std::max(best, std::max(0.0, f.value(x) - f.value(y)) / d);
  }
  return best;
}

}  // namespace plrkit::testing
