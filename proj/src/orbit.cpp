#include "plrkit/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "plrkit/errors.hpp"

namespace plrkit {

bool MultiMap::member(PointIndex x, PointIndex y) const {
  if (margins) {
    const auto m = margins(x, y);
    return std::all_of(m.begin(), m.end(), [](double v) { return v > 0.0; });
  }
  const auto img = image(x);
  return std::binary_search(img.begin(), img.end(), y);
}

MultiMap MultiMap::from_sets(std::string name, std::vector<std::vector<PointIndex>> sets) {
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (PointIndex y : s) {
      if (y >= sets.size()) throw InputError("multimap: image point out of range");
    }
  }
  auto shared = std::make_shared<const std::vector<std::vector<PointIndex>>>(std::move(sets));
  MultiMap m;
  m.name = std::move(name);
  m.size = shared->size();
  m.image = [shared](PointIndex x) { return shared->at(x); };
  return m;
}

MultiMap MultiMap::empty(std::size_t size) {
  return from_sets("empty", std::vector<std::vector<PointIndex>>(size));
}

StarReport check_star_property(const MetricSpace& space, const MultiMap& s) {
  if (s.size != space.size()) throw InputError("star property: map and space sizes differ");
  StarReport rep;
  rep.pass = true;
  for (PointIndex x = 0; x < space.size(); ++x) {
    ++rep.checked;
    const auto img = s.image(x);
    if (std::binary_search(img.begin(), img.end(), x)) {
      rep.pass = false;
      rep.witness = x;
      break;
    }
  }
  rep.note =
      "finite space: any infinite orbit has steps bounded below by the minimum positive distance, "
      "so the clause on finite-length infinite orbits holds vacuously";
  return rep;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::empty_s:
      return "empty_S";
    case Termination::max_iter:
      return "max_iter";
    case Termination::infinite_length:
      return "infinite_length";
  }
  return "unknown";
}

Orbit run_orbit(const MetricSpace& space, const MultiMap& s, PointIndex x0, std::size_t max_iter,
                double length_limit) {
  space.check_index(x0);
  if (s.size != space.size()) throw InputError("run_orbit: map and space sizes differ");
  if (max_iter == 0) max_iter = 10 * space.size();
  Orbit orbit;
  orbit.points.push_back(x0);
  PointIndex cur = x0;
  for (std::size_t it = 0;; ++it) {
    const auto img = s.image(cur);
    if (img.empty()) {
      orbit.termination = Termination::empty_s;
      return orbit;
    }
    if (it == max_iter) {
      orbit.termination = Termination::max_iter;
      return orbit;
    }
    PointIndex next = img.front();
    double best = space.distance(cur, next);
    for (PointIndex y : img) {
      const double d = space.distance(cur, y);
      if (d > best) {
        best = d;
        next = y;
      }
    }
    if (s.margins) orbit.margins.push_back(s.margins(cur, next));
    orbit.points.push_back(next);
    orbit.steps.push_back(best);
    orbit.length += best;
    cur = next;
    if (orbit.length > length_limit) {
      orbit.termination = Termination::infinite_length;
      return orbit;
    }
  }
}

std::optional<std::size_t> verify_orbit(const MultiMap& s, const Orbit& orbit) {
  for (std::size_t i = 0; i + 1 < orbit.points.size(); ++i) {
    if (!s.member(orbit.points[i], orbit.points[i + 1])) return i;
  }
  return std::nullopt;
}

namespace {

struct DeterminationData {
  std::shared_ptr<const MetricSpace> space;
  std::vector<double> f;
  std::vector<double> g;
  std::vector<double> s;  // +inf outside dom |grad f|
  double eps;
  double c;
  PointIndex x_bar;

  bool in_domain(PointIndex x) const { return x != x_bar && std::isfinite(s[x]) && std::isfinite(f[x]); }

  std::vector<double> margins(PointIndex x, PointIndex y, double d) const {
    const double inf = std::numeric_limits<double>::infinity();
    if (!in_domain(x) || y == x || !std::isfinite(g[y]) || !std::isfinite(f[y])) return {-inf, -inf, -inf};
    const double s1 = (f[x] - g[x]) - (f[y] - g[y]);
    const double s2 = (f[x] - eps * d) - f[y];
    const double s3 = std::isfinite(s[y]) ? (s[x] + 2.0 * c * (2.0 + s[x]) * d) - s[y] : -inf;
    return {s1, s2, s3};
  }
};

}  // namespace

MultiMap build_determination_map(const ScalarField& f, const ScalarField& g, std::span<const ExtReal> slope_f,
                                 double eps, double c, PointIndex x_bar) {
  const MetricSpace& space = f.space();
  space.check_index(x_bar);
  if (&g.space() != &space) throw InputError("determination map: f and g live on different spaces");
  if (slope_f.size() != space.size()) throw InputError("determination map: one slope per point required");
  if (!(eps > 0.0) || !(c > 0.0)) throw InputError("determination map: eps and c must be positive");

  auto data = std::make_shared<DeterminationData>();
  data->space = f.space_ptr();
  data->f.assign(f.raw().begin(), f.raw().end());
  data->g.assign(g.raw().begin(), g.raw().end());
  data->s.resize(space.size());
  for (PointIndex i = 0; i < space.size(); ++i) {
    data->s[i] = slope_f[i].value_or(std::numeric_limits<double>::infinity());
    if (i != x_bar && slope_f[i].is_finite() && !(slope_f[i].value() > eps)) {
      throw PreconditionError("determination map: sharp-minimum gap fails (slope <= eps)", space.label(i));
    }
  }
  data->eps = eps;
  data->c = c;
  data->x_bar = x_bar;

  MultiMap m;
  m.name = "determination";
  m.size = space.size();
  m.components = {"S1", "S2", "S3"};
  m.margins = [data](PointIndex x, PointIndex y) {
    return data->margins(x, y, data->space->distance(x, y));
  };
  m.image = [data](PointIndex x) {
    std::vector<PointIndex> out;
    if (!data->in_domain(x)) return out;
    std::vector<double> d(data->space->size());
    data->space->distances_from(x, d);
    for (PointIndex y = 0; y < d.size(); ++y) {
      const auto mg = data->margins(x, y, d[y]);
      if (mg[0] > 0.0 && mg[1] > 0.0 && mg[2] > 0.0) out.push_back(y);
    }
    return out;
  };
  return m;
}

LengthBoundReport orbit_length_bound(const Orbit& orbit, const ScalarField& f, double eps) {
  if (!(eps > 0.0)) throw InputError("orbit_length_bound: eps must be positive");
  if (orbit.points.empty()) throw InputError("orbit_length_bound: empty orbit");
  for (PointIndex p : orbit.points) {
    if (!(f.value(p) >= 0.0)) throw InputError("orbit_length_bound: f must be >= 0 along the orbit");
  }
  LengthBoundReport rep;
  rep.length = orbit.length;
  const double f0 = f.value(orbit.points.front());
  rep.bound = f0 / eps;
  rep.bound_ok = rep.length <= rep.bound;
  rep.telescoped = eps * rep.length;
  rep.decrease = f0 - f.value(orbit.points.back());
  // Summing strict per-step inequalities in floating point can lose a few ulps.
  rep.telescoping_ok = rep.telescoped <= rep.decrease + 1e-12 * (1.0 + f0) * static_cast<double>(orbit.steps.size());
  for (std::size_t i = 0; i < orbit.steps.size(); ++i) {
    const double drop = f.value(orbit.points[i]) - f.value(orbit.points[i + 1]);
    if (!(drop > eps * orbit.steps[i])) {
      rep.insufficient_step = i;
      break;
    }
  }
  rep.ok = rep.bound_ok && rep.telescoping_ok && !rep.insufficient_step;
  return rep;
}

}  // namespace plrkit
