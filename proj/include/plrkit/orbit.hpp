#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plrkit/field.hpp"

namespace plrkit {

/// A multivalued map S on the points of a finite space.
/// `margins`, when set, reports one signed margin per component for a pair (x, y);
/// y is a member of S(x) iff every margin is > 0.
struct MultiMap {
  std::string name;
  std::size_t size = 0;
  std::function<std::vector<PointIndex>(PointIndex)> image;
  std::vector<std::string> components;
  std::function<std::vector<double>(PointIndex, PointIndex)> margins;

  bool member(PointIndex x, PointIndex y) const;

  static MultiMap from_sets(std::string name, std::vector<std::vector<PointIndex>> sets);
  static MultiMap empty(std::size_t size);
};

struct StarReport {
  bool pass = false;
  std::size_t checked = 0;
  std::optional<PointIndex> witness;  // a point with x in S(x)
  std::string note;
};

/// Exhaustive irreflexivity check. The clause about infinite orbits is vacuous on a finite space.
StarReport check_star_property(const MetricSpace& space, const MultiMap& s);

enum class Termination { empty_s, max_iter, infinite_length };
std::string to_string(Termination t);

struct Orbit {
  std::vector<PointIndex> points;
  std::vector<double> steps;
  double length = 0.0;
  Termination termination = Termination::empty_s;
  std::vector<std::vector<double>> margins;  // per step, when the map reports them
};

/// x_{n+1} = argmax_{y in S(x_n)} d(y, x_n), lowest index on ties, until S(x_n) is empty.
/// max_iter = 0 means 10 |space|. Exceeding `length_limit` ends the run with infinite_length.
Orbit run_orbit(const MetricSpace& space, const MultiMap& s, PointIndex x0, std::size_t max_iter = 0,
                double length_limit = std::numeric_limits<double>::infinity());

/// Index of the first step whose target is not in S of its source; nullopt when all are.
std::optional<std::size_t> verify_orbit(const MultiMap& s, const Orbit& orbit);

/// S = S1 ∩ S2 ∩ S3 with
///   S1(x) = {y : (f - g)(y) < (f - g)(x)}
///   S2(x) = {y : f(y) < f(x) - eps d(y, x)}
///   S3(x) = {y : s(y) < s(x) + 2c(2 + s(x)) d(y, x)}
/// on dom S = {finite slope} \ {x_bar}. Throws PreconditionError at a point x != x_bar with s(x) <= eps.
MultiMap build_determination_map(const ScalarField& f, const ScalarField& g, std::span<const ExtReal> slope_f,
                                 double eps, double c, PointIndex x_bar);

struct LengthBoundReport {
  double length = 0.0;
  double bound = 0.0;       // f(x0) / eps
  bool bound_ok = false;
  double telescoped = 0.0;  // eps * length
  double decrease = 0.0;    // f(x0) - f(x_end)
  bool telescoping_ok = false;
  std::optional<std::size_t> insufficient_step;  // first step with f(x_i) - f(x_{i+1}) <= eps d
  bool ok = false;
};

/// f must be >= 0 along the orbit.
LengthBoundReport orbit_length_bound(const Orbit& orbit, const ScalarField& f, double eps);

}  // namespace plrkit
