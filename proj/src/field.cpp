#include "plrkit/field.hpp"

#include <algorithm>
#include <limits>

#include "plrkit/errors.hpp"

namespace plrkit {

ScalarField::ScalarField(std::shared_ptr<const MetricSpace> space, std::vector<ExtReal> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw InputError("field: null space");
  if (values_.size() != space_->size()) {
    throw InputError("field: " + std::to_string(values_.size()) + " values for a space of " +
                     std::to_string(space_->size()) + " points");
  }
  raw_.resize(values_.size());
  bool proper = false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    raw_[i] = values_[i].value_or(std::numeric_limits<double>::infinity());
    proper = proper || values_[i].is_finite();
  }
  if (!proper) throw ImproperFunctionError("field is +inf at every point");
}

ScalarField ScalarField::tabulate(std::shared_ptr<const MetricSpace> space,
                                  const std::function<ExtReal(PointIndex)>& rule) {
  std::vector<ExtReal> values;
  values.reserve(space->size());
  for (PointIndex i = 0; i < space->size(); ++i) values.push_back(rule(i));
  return ScalarField(std::move(space), std::move(values));
}

double ScalarField::value(PointIndex i) const {
  const ExtReal& v = values_.at(i);
  if (v.is_infinite()) throw DomainError("point " + space_->label(i) + " is outside dom f");
  return v.value();
}

ScalarField ScalarField::restricted(std::shared_ptr<const MetricSpace> subspace,
                                    std::span<const PointIndex> keep) const {
  std::vector<ExtReal> values;
  values.reserve(keep.size());
  for (PointIndex i : keep) values.push_back(values_.at(i));
  return ScalarField(std::move(subspace), std::move(values));
}

ScalarField ScalarField::scaled(double r) const {
  std::vector<ExtReal> values;
  values.reserve(values_.size());
  for (const auto& v : values_) values.push_back(v.scaled(r));
  return ScalarField(space_, std::move(values));
}

ScalarField ScalarField::shifted(double a) const {
  std::vector<ExtReal> values;
  values.reserve(values_.size());
  for (const auto& v : values_) values.push_back(v + a);
  return ScalarField(space_, std::move(values));
}

ScalarField ScalarField::plus(const ScalarField& other) const {
  if (other.space_ != space_) throw InputError("field sum over different spaces");
  std::vector<ExtReal> values;
  values.reserve(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) values.push_back(values_[i] + other.values_[i]);
  return ScalarField(space_, std::move(values));
}

PointIndex ScalarField::argmin() const {
  return static_cast<PointIndex>(std::min_element(raw_.begin(), raw_.end()) - raw_.begin());
}

std::optional<PointIndex> SublevelRestriction::local_index(PointIndex parent) const {
  auto it = std::lower_bound(parent_index.begin(), parent_index.end(), parent);
  if (it == parent_index.end() || *it != parent) return std::nullopt;
  return static_cast<PointIndex>(it - parent_index.begin());
}

SublevelRestriction sublevel_restrict(const ScalarField& f, PointIndex x0) {
  f.space().check_index(x0);
  if (!f.finite(x0)) throw InputError("sublevel_restrict: f(x0) = +inf at " + f.space().label(x0));
  const double level = f.value(x0);
  std::vector<PointIndex> keep;
  for (PointIndex i = 0; i < f.size(); ++i) {
    if (f.raw()[i] <= level) keep.push_back(i);
  }
  auto sub = f.space().restrict_to(keep);
  ScalarField restricted = f.restricted(sub, keep);
  return {std::move(sub), std::move(restricted), std::move(keep)};
}

}  // namespace plrkit
