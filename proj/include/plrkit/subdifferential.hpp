#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "plrkit/catalog.hpp"
#include "plrkit/convex_set.hpp"
#include "plrkit/ext_real.hpp"
#include "plrkit/field.hpp"

namespace plrkit {

/// Point -> subdifferential (possibly empty) with the flags the calculus rules need.
class SubdifferentialOracle {
 public:
  using Rule = std::function<ConvexSet(const Vector&)>;

  SubdifferentialOracle(int dim, Rule rule, std::string provenance, bool lipschitz, bool f_regular);

  static SubdifferentialOracle of(const Expression& e, std::string provenance = "expression");
  static SubdifferentialOracle of(const CatalogEntry& entry);

  ConvexSet operator()(const Vector& x) const;

  int dim() const noexcept { return dim_; }
  const std::string& provenance() const noexcept { return provenance_; }
  bool lipschitz() const noexcept { return lipschitz_; }
  bool f_regular() const noexcept { return f_regular_; }

 private:
  int dim_;
  Rule rule_;
  std::string provenance_;
  bool lipschitz_;
  bool f_regular_;
};

/// x -> df(x) + dh(x). h must be locally Lipschitz and F-regular.
SubdifferentialOracle sum_oracle(const SubdifferentialOracle& f, const SubdifferentialOracle& h);

/// Norm of the min-norm subgradient; +inf when the subdifferential is empty.
ExtReal slope_from_subdifferential(const SubdifferentialOracle& oracle, const Vector& x);

/// slope_from_subdifferential at every point of a grid.
std::vector<ExtReal> analytic_slopes(const SubdifferentialOracle& oracle, const EuclideanGrid& grid);

/// Tabulates an expression on a grid.
ScalarField tabulate(const Expression& e, std::shared_ptr<const EuclideanGrid> grid);

/// Deterministic unit directions: +-1 in 1D, `count` equally spaced angles in 2D,
/// coordinate axes plus cube diagonals in higher dimensions.
std::vector<Vector> direction_fan(int dim, int count = 16);

struct ProbeDirection {
  Vector h;
  double estimate = 0.0;  // sampled Clarke derivative f°(x; h)
  double support = 0.0;   // support function of the oracle's set at h
  bool dominated = false; // support >= estimate - slack
};

struct ClarkeProbeReport {
  std::vector<ProbeDirection> directions;
  double slack = 0.0;
  bool ok = false;
};

/// Samples (f(y + t h) - f(y)) / t for y near x and t down to t_min, and checks
/// that the oracle's support function dominates each estimate up to `slack`.
ClarkeProbeReport clarke_slope_probe(const std::function<double(const Vector&)>& f,
                                     const SubdifferentialOracle& oracle, const Vector& x,
                                     const std::vector<Vector>& directions, double t_min, double slack);

}  // namespace plrkit
