#pragma once

#include <optional>
#include <span>
#include <vector>

#include "plrkit/ext_real.hpp"
#include "plrkit/field.hpp"

namespace plrkit {

inline constexpr double kDefaultSlopeCap = 1e12;

struct SlopeEstimate {
  ExtReal value = 0.0;
  std::optional<double> resolution;  // nullopt: exact
  std::optional<PointIndex> witness;  // neighbor attaining the sup, only when value > 0
  bool capped = false;                // sup exceeded the cap and was reported as +inf
};

/// Exact local slope on a finite space. Every point is isolated, so this is 0.
SlopeEstimate local_slope_finite(const ScalarField& f, PointIndex x);

/// max over y in B(x, eps) \ {x} with f(y) finite of [f(x) - f(y)]^+ / d(x, y).
/// Ties between neighbors go to the nearer one, then to the lower index.
SlopeEstimate discrete_slope(const ScalarField& f, PointIndex x, double eps, double cap = kDefaultSlopeCap);

/// discrete_slope at every point; +inf entries where f(x) = +inf.
std::vector<SlopeEstimate> discrete_slopes(const ScalarField& f, double eps, double cap = kDefaultSlopeCap);

struct LipEstimate {
  double value = 0.0;
  std::size_t points = 0;
  bool degenerate = false;  // fewer than two points in the region
  double radius = 0.0;      // 0 when the region was given explicitly
};

/// Largest |g(y) - g(x)| / d(x, y) over pairs in the region. g must be finite there.
LipEstimate lip_estimate(const ScalarField& g, std::span<const PointIndex> region);
LipEstimate lip_estimate(const ScalarField& g, PointIndex center, double radius);

/// lip g(x): the pairwise estimate on balls of radius r, r/2, r/4, ... around x,
/// down to the smallest ball that still has two points.
LipEstimate lip_at_point(const ScalarField& g, PointIndex x, double radius);

struct SlopeLipReport {
  double slope = 0.0;
  double lip = 0.0;
  double slack = 0.0;
  bool holds = false;
};

/// At a local minimum x0 of f + g over B(x0, eps): slope(f, x0) <= lip g(x0) + slack.
/// Throws PreconditionError naming a point where f + g drops below its value at x0.
SlopeLipReport check_slope_lip_at_min(const ScalarField& f, const ScalarField& g, PointIndex x0, double eps,
                                      double slack = 0.0);

}  // namespace plrkit
