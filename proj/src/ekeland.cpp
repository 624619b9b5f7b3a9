#include "plrkit/ekeland.hpp"

#include <cmath>
#include <limits>

#include "plrkit/errors.hpp"
#include "plrkit/slope.hpp"

namespace plrkit {

// The selection rule and the verifier share these margin expressions so that a
// terminated iteration passes the verifier bit-for-bit.
namespace {

inline double descent_margin(double f_from, double f_to, double lambda, double d) {
  return (f_from - f_to) - lambda * d;
}

}  // namespace

EkelandCheck verify_ekeland(const ScalarField& f, PointIndex x0, double lambda, PointIndex x_l) {
  const MetricSpace& space = f.space();
  EkelandCheck chk;
  const double f0 = f.value(x0);
  const double fl = f.value(x_l);
  chk.distance_margin = descent_margin(f0, fl, lambda, space.distance(x_l, x0));
  chk.strict_margin = std::numeric_limits<double>::infinity();
  bool strict = true;
  for (PointIndex x = 0; x < space.size(); ++x) {
    if (x == x_l || !f.finite(x)) continue;
    // f(x) + lambda d > f(x_l)  <=>  descent margin from x_l to x is negative
    const double m = -descent_margin(fl, f.raw()[x], lambda, space.distance(x_l, x));
    if (m < chk.strict_margin) chk.strict_margin = m;
    if (!(m > 0.0) && strict) {
      strict = false;
      chk.violator = x;
    }
  }
  chk.ok = chk.distance_margin >= 0.0 && strict;
  if (chk.distance_margin < 0.0 && !chk.violator) chk.violator = x0;
  return chk;
}

EkelandResult ekeland_point(const ScalarField& f, PointIndex x0, double lambda) {
  const MetricSpace& space = f.space();
  space.check_index(x0);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("ekeland: lambda must be positive");
  if (!f.finite(x0)) throw DomainError("ekeland: f(x0) = +inf at " + space.label(x0));

  const std::size_t n = space.size();
  const double f0 = f.value(x0);
  std::vector<double> d0(n);
  std::vector<double> dc(n);
  space.distances_from(x0, d0);

  EkelandResult res;
  res.x0 = x0;
  res.lambda = lambda;
  PointIndex cur = x0;
  res.path.push_back(cur);
  while (true) {
    space.distances_from(cur, dc);
    const double fc = f.raw()[cur];
    PointIndex next = cur;
    double best = std::numeric_limits<double>::infinity();
    for (PointIndex x = 0; x < n; ++x) {
      if (x == cur || !f.finite(x)) continue;
      const double fx = f.raw()[x];
      if (descent_margin(fc, fx, lambda, dc[x]) < 0.0) continue;
      if (descent_margin(f0, fx, lambda, d0[x]) < 0.0) continue;
      if (fx < best) {
        best = fx;
        next = x;
      }
    }
    if (next == cur) break;
    cur = next;
    res.path.push_back(cur);
  }
  res.x_lambda = cur;
  res.decrease = f0 - f.raw()[cur];
  res.check = verify_ekeland(f, x0, lambda, cur);
  res.strict_min_verified = res.check.ok;
  return res;
}

PerturbedMinReport slope_perturbed_min(const ScalarField& f, const ScalarField& g, double eps,
                                       std::optional<double> resolution) {
  if (!(eps > 0.0)) throw InputError("slope_perturbed_min: eps must be positive");
  for (PointIndex i = 0; i < g.size(); ++i) {
    if (!g.finite(i)) throw InputError("slope_perturbed_min: g must be real-valued");
  }
  const ScalarField sum = f.plus(g);
  PerturbedMinReport rep;
  rep.eps = eps;
  rep.inf_value = sum.value(sum.argmin());
  rep.start = sum.argmin();
  for (PointIndex i = 0; i < sum.size(); ++i) {
    if (sum.finite(i) && sum.value(i) <= rep.inf_value + eps) {
      rep.start = i;
      break;
    }
  }
  rep.ekeland = ekeland_point(sum, rep.start, eps);
  rep.x_eps = rep.ekeland.x_lambda;
  rep.value = sum.value(rep.x_eps);
  rep.value_ok = rep.value <= rep.inf_value + eps;
  if (resolution) {
    rep.slope_f = discrete_slope(f, rep.x_eps, *resolution).value.value_or(std::numeric_limits<double>::infinity());
    rep.lip_g = lip_estimate(g, rep.x_eps, *resolution).value;
  } else {
    rep.slope_f = local_slope_finite(f, rep.x_eps).value.value();
    rep.lip_g = 0.0;
  }
  // The bound is exact in real arithmetic; allow for the rounding of the two sups.
  rep.slope_ok = rep.slope_f <= rep.lip_g + eps + 1e-12 * (1.0 + rep.lip_g);
  return rep;
}

}  // namespace plrkit
