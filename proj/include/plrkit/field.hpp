#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "plrkit/ext_real.hpp"
#include "plrkit/metric_space.hpp"

namespace plrkit {

/// Extended-real values tabulated on every point of a metric space.
/// Construction rejects the constant +inf function.
class ScalarField {
 public:
  ScalarField(std::shared_ptr<const MetricSpace> space, std::vector<ExtReal> values);

  static ScalarField tabulate(std::shared_ptr<const MetricSpace> space,
                              const std::function<ExtReal(PointIndex)>& rule);

  const MetricSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const MetricSpace>& space_ptr() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }

  const ExtReal& operator[](PointIndex i) const { return values_.at(i); }
  bool finite(PointIndex i) const { return values_.at(i).is_finite(); }

  /// Finite value at i; DomainError when f(i) = +inf.
  double value(PointIndex i) const;

  /// Values as doubles with +inf for points outside the domain; feeds the kernels only.
  std::span<const double> raw() const noexcept { return raw_; }

  const std::vector<ExtReal>& values() const noexcept { return values_; }

  /// Field on the induced subspace; `keep` must be strictly increasing.
  ScalarField restricted(std::shared_ptr<const MetricSpace> subspace, std::span<const PointIndex> keep) const;

  ScalarField scaled(double r) const;
  ScalarField shifted(double a) const;
  ScalarField plus(const ScalarField& other) const;

  /// Index of the smallest finite value (lowest index on ties).
  PointIndex argmin() const;

 private:
  std::shared_ptr<const MetricSpace> space_;
  std::vector<ExtReal> values_;
  std::vector<double> raw_;
};

struct SublevelRestriction {
  std::shared_ptr<const MetricSpace> space;
  ScalarField field;
  std::vector<PointIndex> parent_index;  // subspace index -> index in the original space

  /// Subspace index of a parent point, if it survived the filter.
  std::optional<PointIndex> local_index(PointIndex parent) const;
};

/// Y = {x : f(x) <= f(x0)} with the induced metric and f restricted to it.
SublevelRestriction sublevel_restrict(const ScalarField& f, PointIndex x0);

}  // namespace plrkit
