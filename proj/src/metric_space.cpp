#include "plrkit/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "plrkit/errors.hpp"
#include "plrkit/io.hpp"
#include "plrkit/kernels.hpp"

namespace plrkit {

// ---------------------------------------------------------------------------
// MetricSpace

std::vector<PointIndex> MetricSpace::ball(PointIndex x, double r, BallKind kind) const {
  check_index(x);
  if (!(r >= 0.0)) throw InputError("ball: radius must be nonnegative");
  std::vector<double> d(size());
  distances_from(x, d);
  std::vector<PointIndex> out;
  for (PointIndex j = 0; j < d.size(); ++j) {
    const bool inside = kind == BallKind::closed ? d[j] <= r : d[j] < r;
    if (inside) out.push_back(j);
  }
  return out;
}

void MetricSpace::check_index(PointIndex i) const {
  if (i >= size()) throw InputError("unknown point index " + std::to_string(i));
}

std::optional<PointIndex> MetricSpace::find(const std::string& label_text) const {
  for (PointIndex i = 0; i < size(); ++i) {
    if (label(i) == label_text) return i;
  }
  return std::nullopt;
}

double MetricSpace::diameter() const {
  double best = 0.0;
  std::vector<double> d(size());
  for (PointIndex i = 0; i < size(); ++i) {
    distances_from(i, d);
    for (double v : d) best = std::max(best, v);
  }
  return best;
}

// ---------------------------------------------------------------------------
// FiniteMetricSpace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> ids, std::vector<double> dist,
                                     double tolerance) {
  const std::size_t n = ids.size();
  if (n == 0) throw InputError("finite space: at least one point required");
  if (dist.size() != n * n) {
    throw InputError("finite space: distance matrix has " + std::to_string(dist.size()) +
                     " entries, expected " + std::to_string(n * n));
  }
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw InputError("finite space: duplicate point id '" + id + "'");
  }
  auto at = [&](std::size_t i, std::size_t j) { return dist[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) throw InputError("finite space: dist[" + ids[i] + "][" + ids[i] + "] must be 0");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v)) throw InputError("finite space: distances must be finite");
      if (i != j && !(v > 0.0)) {
        throw InputError("finite space: dist[" + ids[i] + "][" + ids[j] + "] must be positive");
      }
      if (std::fabs(v - at(j, i)) > tolerance * std::max(1.0, std::fabs(v))) {
        throw InputError("finite space: distance matrix is not symmetric at (" + ids[i] + ", " + ids[j] + ")");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i * n + j] = dist[j * n + i] = 0.5 * (at(i, j) + at(j, i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double lhs = at(i, k);
        const double rhs = at(i, j) + at(j, k);
        if (lhs > rhs + tolerance * std::max(1.0, rhs)) {
          throw InputError("finite space: triangle inequality fails for (" + ids[i] + ", " + ids[j] + ", " +
                           ids[k] + ")");
        }
      }
    }
  }
  ids_ = std::move(ids);
  dist_ = std::move(dist);
}

FiniteMetricSpace::FiniteMetricSpace(Unchecked, std::vector<std::string> ids, std::vector<double> dist)
    : ids_(std::move(ids)), dist_(std::move(dist)) {}

FiniteMetricSpace FiniteMetricSpace::path(std::size_t n, double step) {
  std::vector<std::string> ids;
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = step * static_cast<double>(i > j ? i - j : j - i);
    }
  }
  return FiniteMetricSpace(std::move(ids), std::move(dist));
}

void FiniteMetricSpace::distances_from(PointIndex a, std::span<double> out) const {
  const std::size_t n = ids_.size();
  std::copy_n(dist_.begin() + static_cast<std::ptrdiff_t>(a * n), n, out.begin());
}

std::shared_ptr<const MetricSpace> FiniteMetricSpace::restrict_to(std::span<const PointIndex> keep) const {
  const std::size_t n = ids_.size();
  std::vector<std::string> ids;
  std::vector<double> dist;
  dist.reserve(keep.size() * keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const PointIndex i = keep[k];
    check_index(i);
    if (k > 0 && i <= keep[k - 1]) throw InputError("restriction indices must be strictly increasing");
    ids.push_back(ids_[i]);
    for (PointIndex j : keep) dist.push_back(dist_[i * n + j]);
  }
  if (ids.empty()) throw InputError("restriction to an empty set of points");
  return std::shared_ptr<const MetricSpace>(new FiniteMetricSpace(Unchecked{}, std::move(ids), std::move(dist)));
}

// ---------------------------------------------------------------------------
// EuclideanGrid

EuclideanGrid::EuclideanGrid(GridSpec spec) : spec_(std::move(spec)) {
  if (spec_.dim < 1 || spec_.dim > 4) throw InputError("grid: dim must be in 1..4");
  if (spec_.center.size() != spec_.dim) throw InputError("grid: center has wrong dimension");
  if (!(spec_.radius > 0.0) || !std::isfinite(spec_.radius)) throw InputError("grid: radius must be positive");
  if (!(spec_.h > 0.0) || spec_.h > spec_.radius) throw InputError("grid: need 0 < h <= radius");

  const auto dim = static_cast<std::size_t>(spec_.dim);
  extent_ = static_cast<std::int32_t>(std::floor(spec_.radius / spec_.h + 1e-9));
  coords_.assign(dim, {});
  std::vector<std::int32_t> k(dim, -extent_);
  const double limit = spec_.radius * (1.0 + 1e-12);
  while (true) {
    double norm2 = 0.0;
    for (auto v : k) norm2 += static_cast<double>(v) * static_cast<double>(v);
    if (spec_.h * std::sqrt(norm2) <= limit) {
      for (std::size_t i = 0; i < dim; ++i) {
        lattice_.push_back(k[i]);
        coords_[i].push_back(spec_.center[static_cast<Eigen::Index>(i)] + spec_.h * static_cast<double>(k[i]));
      }
      ++count_;
    }
    // Odometer with the last coordinate fastest.
    std::size_t pos = dim;
    while (pos > 0) {
      --pos;
      if (k[pos] < extent_) {
        ++k[pos];
        break;
      }
      k[pos] = -extent_;
      if (pos == 0) {
        pos = dim + 1;
        break;
      }
    }
    if (pos == dim + 1) break;
  }
  build_lookup();
}

EuclideanGrid::EuclideanGrid(Restricted, const EuclideanGrid& parent, std::span<const PointIndex> keep)
    : spec_(parent.spec_), extent_(parent.extent_) {
  const auto dim = static_cast<std::size_t>(spec_.dim);
  coords_.assign(dim, {});
  PointIndex previous = 0;
  for (std::size_t n = 0; n < keep.size(); ++n) {
    const PointIndex i = keep[n];
    parent.check_index(i);
    if (n > 0 && i <= previous) throw InputError("restriction indices must be strictly increasing");
    previous = i;
    for (std::size_t d = 0; d < dim; ++d) {
      lattice_.push_back(parent.lattice_[i * dim + d]);
      coords_[d].push_back(parent.coords_[d][i]);
    }
  }
  count_ = keep.size();
  if (count_ == 0) throw InputError("restriction to an empty set of points");
  build_lookup();
}

void EuclideanGrid::build_lookup() {
  const auto dim = static_cast<std::size_t>(spec_.dim);
  const std::uint64_t side = 2 * static_cast<std::uint64_t>(extent_) + 1;
  std::uint64_t total = 1;
  bool dense = true;
  for (std::size_t i = 0; i < dim; ++i) {
    total *= side;
    if (total > (std::uint64_t{1} << 24)) {
      dense = false;
      break;
    }
  }
  auto key_of = [&](const std::int32_t* k) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < dim; ++i) key = key * side + static_cast<std::uint64_t>(k[i] + extent_);
    return key;
  };
  if (dense) {
    dense_lookup_.assign(total, -1);
    for (PointIndex j = 0; j < count_; ++j) {
      dense_lookup_[key_of(&lattice_[j * dim])] = static_cast<std::int32_t>(j);
    }
  } else {
    for (PointIndex j = 0; j < count_; ++j) sparse_lookup_.emplace(key_of(&lattice_[j * dim]), j);
  }
}

std::optional<PointIndex> EuclideanGrid::lookup(const std::int32_t* k) const {
  const auto dim = static_cast<std::size_t>(spec_.dim);
  const std::uint64_t side = 2 * static_cast<std::uint64_t>(extent_) + 1;
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (k[i] < -extent_ || k[i] > extent_) return std::nullopt;
    key = key * side + static_cast<std::uint64_t>(k[i] + extent_);
  }
  if (!dense_lookup_.empty()) {
    const std::int32_t v = dense_lookup_[key];
    if (v < 0) return std::nullopt;
    return static_cast<PointIndex>(v);
  }
  auto it = sparse_lookup_.find(key);
  if (it == sparse_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<const double*> EuclideanGrid::coordinate_pointers() const {
  std::vector<const double*> ptrs;
  for (const auto& c : coords_) ptrs.push_back(c.data());
  return ptrs;
}

double EuclideanGrid::distance(PointIndex a, PointIndex b) const {
  double acc = 0.0;
  for (const auto& c : coords_) {
    const double diff = c[b] - c[a];
    acc = acc + diff * diff;
  }
  return std::sqrt(acc);
}

void EuclideanGrid::distances_from(PointIndex a, std::span<double> out) const {
  check_index(a);
  std::vector<double> q(coords_.size());
  for (std::size_t k = 0; k < coords_.size(); ++k) q[k] = coords_[k][a];
  const auto ptrs = coordinate_pointers();
  kernels::active().distances({ptrs, count_}, q.data(), out.data());
}

void EuclideanGrid::distances_to(const Vector& q, std::span<double> out) const {
  if (q.size() != spec_.dim) throw InputError("grid: query has wrong dimension");
  const auto ptrs = coordinate_pointers();
  kernels::active().distances({ptrs, count_}, q.data(), out.data());
}

std::vector<PointIndex> EuclideanGrid::ball(PointIndex x, double r, BallKind kind) const {
  check_index(x);
  if (!(r >= 0.0)) throw InputError("ball: radius must be nonnegative");
  const auto dim = static_cast<std::size_t>(spec_.dim);
  const auto reach = static_cast<std::int32_t>(std::floor(r / spec_.h)) + 1;
  std::vector<std::int32_t> off(dim, -reach);
  std::vector<std::int32_t> key(dim);
  std::vector<PointIndex> out;
  const double coarse = r + 2.0 * spec_.h;
  while (true) {
    double norm2 = 0.0;
    for (auto v : off) norm2 += static_cast<double>(v) * static_cast<double>(v);
    if (spec_.h * std::sqrt(norm2) <= coarse) {
      for (std::size_t i = 0; i < dim; ++i) key[i] = lattice_[x * dim + i] + off[i];
      if (auto j = lookup(key.data())) {
        const double d = distance(x, *j);
        if (kind == BallKind::closed ? d <= r : d < r) out.push_back(*j);
      }
    }
    std::size_t pos = dim;
    bool done = false;
    while (true) {
      if (pos == 0) {
        done = true;
        break;
      }
      --pos;
      if (off[pos] < reach) {
        ++off[pos];
        break;
      }
      off[pos] = -reach;
    }
    if (done) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string EuclideanGrid::label(PointIndex i) const {
  check_index(i);
  std::string s = "[";
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (k > 0) s += ",";
    s += format_double(coords_[k][i]);
  }
  return s + "]";
}

std::shared_ptr<const MetricSpace> EuclideanGrid::restrict_to(std::span<const PointIndex> keep) const {
  return std::shared_ptr<const MetricSpace>(new EuclideanGrid(Restricted{}, *this, keep));
}

Vector EuclideanGrid::point(PointIndex i) const {
  check_index(i);
  Vector v(spec_.dim);
  for (std::size_t k = 0; k < coords_.size(); ++k) v[static_cast<Eigen::Index>(k)] = coords_[k][i];
  return v;
}

PointIndex EuclideanGrid::nearest(const Vector& q) const {
  std::vector<double> d(count_);
  distances_to(q, d);
  return static_cast<PointIndex>(std::min_element(d.begin(), d.end()) - d.begin());
}

std::optional<PointIndex> EuclideanGrid::locate(const Vector& q) const {
  if (q.size() != spec_.dim) throw InputError("grid: query has wrong dimension");
  const auto dim = static_cast<std::size_t>(spec_.dim);
  std::vector<std::int32_t> key(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    const double t = (q[e] - spec_.center[e]) / spec_.h;
    key[i] = static_cast<std::int32_t>(std::lround(t));
  }
  auto j = lookup(key.data());
  if (!j) return std::nullopt;
  if ((point(*j) - q).norm() > 1e-9 * spec_.h) return std::nullopt;
  return j;
}

std::shared_ptr<const EuclideanGrid> open_ball_grid(const Vector& center, double radius, double h) {
  if (!(h > 0.0) || !(radius > 0.0)) throw InputError("open_ball_grid: radius and spacing must be positive");
  EuclideanGrid full(GridSpec{static_cast<int>(center.size()), center, radius, std::min(h, radius)});
  std::vector<double> d(full.size());
  full.distances_to(center, d);
  // Shave a relative 1e-12 so points at distance exactly `radius` stay out after rounding.
  const double limit = radius * (1.0 - 1e-12);
  std::vector<PointIndex> keep;
  for (PointIndex i = 0; i < full.size(); ++i) {
    if (d[i] < limit) keep.push_back(i);
  }
  return std::static_pointer_cast<const EuclideanGrid>(full.restrict_to(keep));
}

}  // namespace plrkit
