#include "plrkit/subdifferential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plrkit/errors.hpp"
#include "plrkit/parallel.hpp"

namespace plrkit {

SubdifferentialOracle::SubdifferentialOracle(int dim, Rule rule, std::string provenance, bool lipschitz,
                                             bool f_regular)
    : dim_(dim), rule_(std::move(rule)), provenance_(std::move(provenance)), lipschitz_(lipschitz),
      f_regular_(f_regular) {}

SubdifferentialOracle SubdifferentialOracle::of(const Expression& e, std::string provenance) {
  return SubdifferentialOracle(
      e.dim(), [e](const Vector& x) { return e.subdifferential(x); }, std::move(provenance), e.lipschitz(),
      e.f_regular());
}

SubdifferentialOracle SubdifferentialOracle::of(const CatalogEntry& entry) {
  const Expression e = entry.expr;
  return SubdifferentialOracle(
      e.dim(), [e](const Vector& x) { return e.subdifferential(x); }, entry.id, entry.lipschitz_flag,
      entry.f_regular_flag);
}

ConvexSet SubdifferentialOracle::operator()(const Vector& x) const {
  if (x.size() != dim_) throw InputError("oracle '" + provenance_ + "' queried at a point of the wrong dimension");
  ConvexSet s = rule_(x);
  if (s.dim() != dim_) throw InputError("oracle '" + provenance_ + "' returned a set of the wrong dimension");
  return s;
}

SubdifferentialOracle sum_oracle(const SubdifferentialOracle& f, const SubdifferentialOracle& h) {
  if (f.dim() != h.dim()) throw InputError("sum_oracle: incompatible dimensions");
  if (!h.lipschitz() || !h.f_regular()) {
    throw InputError("sum_oracle: '" + h.provenance() + "' must be locally Lipschitz and F-regular");
  }
  return SubdifferentialOracle(
      f.dim(), [f, h](const Vector& x) { return f(x) + h(x); }, f.provenance() + "+" + h.provenance(),
      f.lipschitz(), f.f_regular());
}

ExtReal slope_from_subdifferential(const SubdifferentialOracle& oracle, const Vector& x) {
  auto p = min_norm_element(oracle(x));
  if (!p) return ExtReal::infinity();
  return p->norm();
}

std::vector<ExtReal> analytic_slopes(const SubdifferentialOracle& oracle, const EuclideanGrid& grid) {
  std::vector<ExtReal> out(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = slope_from_subdifferential(oracle, grid.point(i)); });
  return out;
}

ScalarField tabulate(const Expression& e, std::shared_ptr<const EuclideanGrid> grid) {
  if (grid->dim() != e.dim()) throw InputError("tabulate: expression and grid dimensions differ");
  std::vector<ExtReal> values(grid->size(), 0.0);
  parallel_for(grid->size(), [&](std::size_t i) { values[i] = e(grid->point(i)); });
  return ScalarField(std::move(grid), std::move(values));
}

std::vector<Vector> direction_fan(int dim, int count) {
  std::vector<Vector> fan;
  if (dim == 1) {
    fan.push_back(Vector::Constant(1, 1.0));
    fan.push_back(Vector::Constant(1, -1.0));
    return fan;
  }
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      Vector u(2);
      u << std::cos(t), std::sin(t);
      fan.push_back(u);
    }
    return fan;
  }
  for (int i = 0; i < dim; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector u = Vector::Zero(dim);
      u[i] = s;
      fan.push_back(u);
    }
  }
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Vector u(dim);
    for (int i = 0; i < dim; ++i) u[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    fan.push_back(u / std::sqrt(static_cast<double>(dim)));
  }
  return fan;
}

ClarkeProbeReport clarke_slope_probe(const std::function<double(const Vector&)>& f,
                                     const SubdifferentialOracle& oracle, const Vector& x,
                                     const std::vector<Vector>& directions, double t_min, double slack) {
  if (!oracle.lipschitz()) {
    throw UnsupportedProbe("clarke_slope_probe: '" + oracle.provenance() + "' is not locally Lipschitz");
  }
  if (!(t_min > 0.0)) throw InputError("clarke_slope_probe: t_min must be positive");
  const int dim = oracle.dim();
  const ConvexSet set = oracle(x);

  // Base points y = x + s u with s in {0, t_min, 4 t_min} along the axes and the probe direction.
  std::vector<Vector> offsets_dirs;
  for (int i = 0; i < dim; ++i) {
    for (double sgn : {1.0, -1.0}) {
      Vector u = Vector::Zero(dim);
      u[i] = sgn;
      offsets_dirs.push_back(u);
    }
  }

  ClarkeProbeReport rep;
  rep.slack = slack;
  rep.ok = true;
  for (const Vector& h : directions) {
    if (h.size() != dim) throw InputError("clarke_slope_probe: direction of the wrong dimension");
    std::vector<Vector> bases{x};
    for (double s : {t_min, 4.0 * t_min}) {
      for (const auto& u : offsets_dirs) bases.push_back(x + s * u);
      bases.push_back(x + s * h);
      bases.push_back(x - s * h);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& y : bases) {
      const double fy = f(y);
      for (double t : {t_min, 2.0 * t_min, 4.0 * t_min}) best = std::max(best, (f(y + t * h) - fy) / t);
    }
    ProbeDirection d;
    d.h = h;
    d.estimate = best;
    d.support = set.support(h);
    d.dominated = d.support >= d.estimate - slack;
    rep.ok = rep.ok && d.dominated;
    rep.directions.push_back(std::move(d));
  }
  return rep;
}

}  // namespace plrkit
