#include "plrkit/slope.hpp"

#include <algorithm>
#include <cmath>

#include "plrkit/errors.hpp"
#include "plrkit/kernels.hpp"
#include "plrkit/parallel.hpp"

namespace plrkit {

SlopeEstimate local_slope_finite(const ScalarField& f, PointIndex x) {
  f.space().check_index(x);
  if (!f.finite(x)) throw DomainError("slope at " + f.space().label(x) + ": f(x) = +inf");
  return SlopeEstimate{};
}

SlopeEstimate discrete_slope(const ScalarField& f, PointIndex x, double eps, double cap) {
  const MetricSpace& space = f.space();
  space.check_index(x);
  if (!(eps > 0.0)) throw InputError("discrete_slope: eps must be positive");
  if (!f.finite(x)) throw DomainError("slope at " + space.label(x) + ": f(x) = +inf");

  std::vector<PointIndex> nbrs = space.ball(x, eps);
  nbrs.erase(std::remove(nbrs.begin(), nbrs.end(), x), nbrs.end());
  std::vector<double> d(nbrs.size());
  std::vector<double> fy(nbrs.size());
  for (std::size_t j = 0; j < nbrs.size(); ++j) {
    d[j] = space.distance(x, nbrs[j]);
    fy[j] = f.raw()[nbrs[j]];
  }

  SlopeEstimate est;
  est.resolution = eps;
  const kernels::ArgBest best = kernels::active().max_descent_quotient(f.value(x), fy.data(), d.data(), nbrs.size());
  if (best.index == kernels::npos || !(best.value > 0.0)) return est;
  est.witness = nbrs[best.index];
  if (best.value > cap) {
    est.value = ExtReal::infinity();
    est.capped = true;
  } else {
    est.value = best.value;
  }
  return est;
}

std::vector<SlopeEstimate> discrete_slopes(const ScalarField& f, double eps, double cap) {
  std::vector<SlopeEstimate> out(f.size());
  parallel_for(f.size(), [&](std::size_t i) {
    if (f.finite(i)) {
      out[i] = discrete_slope(f, i, eps, cap);
    } else {
      out[i].value = ExtReal::infinity();
      out[i].resolution = eps;
    }
  });
  return out;
}

LipEstimate lip_estimate(const ScalarField& g, std::span<const PointIndex> region) {
  const MetricSpace& space = g.space();
  LipEstimate est;
  est.points = region.size();
  for (PointIndex i : region) {
    space.check_index(i);
    if (!g.finite(i)) throw DomainError("lip_estimate: g = +inf at " + space.label(i));
  }
  if (region.size() < 2) {
    est.degenerate = true;
    return est;
  }
  std::vector<double> d;
  std::vector<double> gy;
  for (std::size_t a = 0; a + 1 < region.size(); ++a) {
    const std::size_t rest = region.size() - a - 1;
    d.resize(rest);
    gy.resize(rest);
    for (std::size_t b = 0; b < rest; ++b) {
      d[b] = space.distance(region[a], region[a + 1 + b]);
      gy[b] = g.raw()[region[a + 1 + b]];
    }
    const auto best = kernels::active().max_abs_quotient(g.raw()[region[a]], gy.data(), d.data(), rest);
    est.value = std::max(est.value, best.value);
  }
  return est;
}

LipEstimate lip_estimate(const ScalarField& g, PointIndex center, double radius) {
  if (!(radius >= 0.0)) throw InputError("lip_estimate: radius must be nonnegative");
  const std::vector<PointIndex> region = g.space().ball(center, radius);
  LipEstimate est = lip_estimate(g, region);
  est.radius = radius;
  return est;
}

LipEstimate lip_at_point(const ScalarField& g, PointIndex x, double radius) {
  LipEstimate best = lip_estimate(g, x, radius);
  if (best.degenerate) return best;
  for (double r = radius / 2; r > 0.0; r /= 2) {
    LipEstimate next = lip_estimate(g, x, r);
    if (next.degenerate) break;
    best = next;
  }
  return best;
}

SlopeLipReport check_slope_lip_at_min(const ScalarField& f, const ScalarField& g, PointIndex x0, double eps,
                                      double slack) {
  const MetricSpace& space = f.space();
  if (&g.space() != &space) throw InputError("check_slope_lip_at_min: f and g live on different spaces");
  if (!f.finite(x0) || !g.finite(x0)) throw DomainError("check_slope_lip_at_min: x0 outside the domain");
  const double level = f.value(x0) + g.value(x0);
  for (PointIndex y : space.ball(x0, eps)) {
    if (!f.finite(y) || !g.finite(y)) continue;
    if (f.value(y) + g.value(y) < level) {
      throw PreconditionError("x0 is not a local minimum of f + g", space.label(y));
    }
  }
  SlopeLipReport report;
  report.slope = discrete_slope(f, x0, eps).value.value();
  report.lip = lip_at_point(g, x0, eps).value;
  report.slack = slack;
  report.holds = report.slope <= report.lip + slack;
  return report;
}

}  // namespace plrkit
