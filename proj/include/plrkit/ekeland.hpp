#pragma once

#include <optional>
#include <vector>

#include "plrkit/field.hpp"

namespace plrkit {

struct EkelandCheck {
  bool ok = false;
  double distance_margin = 0.0;  // (f(x0) - f(x_l)) - lambda d(x_l, x0); must be >= 0
  double strict_margin = 0.0;    // min over x != x_l of f(x) + lambda d(x_l, x) - f(x_l); must be > 0
  std::optional<PointIndex> violator;
};

/// Brute-force check of both Ekeland inequalities for a candidate x_l.
EkelandCheck verify_ekeland(const ScalarField& f, PointIndex x0, double lambda, PointIndex x_l);

struct EkelandResult {
  PointIndex x_lambda = 0;
  PointIndex x0 = 0;
  double lambda = 0.0;
  double decrease = 0.0;  // f(x0) - f(x_lambda)
  bool strict_min_verified = false;
  EkelandCheck check;
  std::vector<PointIndex> path;  // iterates, starting at x0
};

/// Repeatedly moves to the minimizer of f (lowest index on ties) over
/// {x != current : f(x) + lambda d(x, current) <= f(current), f(x) + lambda d(x, x0) <= f(x0)}
/// until that set is empty. Terminates because f strictly decreases.
EkelandResult ekeland_point(const ScalarField& f, PointIndex x0, double lambda);

struct PerturbedMinReport {
  PointIndex x_eps = 0;
  PointIndex start = 0;      // the eps-minimizer Ekeland starts from
  double eps = 0.0;
  double value = 0.0;        // (f + g)(x_eps)
  double inf_value = 0.0;    // min of f + g over the space
  double slope_f = 0.0;
  double lip_g = 0.0;
  bool value_ok = false;     // (f + g)(x_eps) <= inf(f + g) + eps
  bool slope_ok = false;     // slope_f <= lip_g + eps
  EkelandResult ekeland;
};

/// Ekeland on f + g with lambda = eps from the lowest-index eps-minimizer.
/// With `resolution` the slope of f and lip g are taken at that scale;
/// without it the exact finite-space slope (0) is used.
PerturbedMinReport slope_perturbed_min(const ScalarField& f, const ScalarField& g, double eps,
                                       std::optional<double> resolution = std::nullopt);

}  // namespace plrkit
