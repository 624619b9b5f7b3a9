#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plrkit/catalog.hpp"
#include "plrkit/ekeland.hpp"
#include "plrkit/field.hpp"
#include "plrkit/subdifferential.hpp"

namespace plrkit {

/// delta' = min{delta, 1/(9c)}
double delta_prime(double c, double delta);
/// c' = 6c
double c_prime(double c);
/// delta-hat = min{delta/2, 1/(18c)}
double delta_hat(double c, double delta);

struct PlrSampling {
  double spacing = 0.0;               // 0: delta / 20
  std::size_t exhaustive_limit = 2000;  // all pairs when the ball sample is at most this big
  std::size_t anchors = 2000;         // stratified random anchors otherwise
  std::uint64_t seed = 0;
  int boundary_points = 8;            // random support points per subdifferential
  double tolerance = 1e-9;
  std::size_t max_violations = 16;
};

struct PlrViolation {
  Vector x;
  Vector y;
  Vector p;
  double margin = 0.0;
};

/// Result of checking f(y) >= f(x) + <p, y - x> - c (1 + |p|) |y - x|^2 on a sample of B°(center; delta).
struct PlrCertificate {
  Expression f;
  SubdifferentialOracle oracle;
  Vector center;
  double c = 0.0;
  double delta = 0.0;
  PlrSampling sampling;

  bool pass = false;
  std::size_t points = 0;
  std::size_t anchors = 0;
  std::size_t pairs = 0;
  double worst_margin = 0.0;
  std::optional<PlrViolation> worst;
  std::vector<PlrViolation> violations;  // by anchor index, at most sampling.max_violations
};

/// Subgradients tested at a point: generators, the min-norm element, and seeded support points.
std::vector<Vector> subgradient_selection(const ConvexSet& s, int boundary_points, std::uint64_t seed);

PlrCertificate certify_plr(const Expression& f, const SubdifferentialOracle& oracle, const Vector& center, double c,
                           double delta, const PlrSampling& sampling = {});
PlrCertificate certify_plr(const Expression& f, const Vector& center, double c, double delta,
                           const PlrSampling& sampling = {});

/// Re-certifies alpha * f with the same (c, delta); alpha must lie in (0, 1).
PlrCertificate scale_plr(const PlrCertificate& cert, double alpha);

struct AddConvexResult {
  PlrCertificate cert;
  double lipschitz = 0.0;    // L, the bound on |dh| over the ball
  double coefficient = 0.0;  // c (L + 1)
};

/// Certifies f + h at coefficient c (L + 1) on the same ball with the sum oracle.
AddConvexResult add_convex_plr(const PlrCertificate& cert, const Expression& h);

struct RegularSlopeViolation {
  PointIndex x = 0;
  PointIndex y = 0;
  double margin = 0.0;
};

struct RegularSlopeOptions {
  double tolerance = 1e-9;
  std::size_t exhaustive_limit = 4000;
  std::size_t anchors = 4000;
  std::uint64_t seed = 0;
  std::size_t max_violations = 16;
};

struct RegularSlopeCertificate {
  double c = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t pairs = 0;
  std::size_t skipped = 0;  // anchors with slope or value +inf
  double worst_margin = 0.0;
  std::optional<RegularSlopeViolation> worst;
  std::vector<RegularSlopeViolation> violations;
};

/// Checks f(y) >= f(x) - s(x) d - c (1 + s(x)) d^2 with s the given slope source.
RegularSlopeCertificate certify_regular_slope(const ScalarField& f, std::span<const ExtReal> slopes, double c,
                                              const RegularSlopeOptions& options = {});

struct SharpMinReport {
  Expression f1;
  double c_prime = 0.0;
  double delta_prime = 0.0;
  bool plr_pass = false;
  std::size_t sampled = 0;
  double f1_at_center = 0.0;
  double min_sampled_f1 = 0.0;
  bool center_is_min = false;
  double min_slope = 0.0;  // over the punctured ball sample
  Vector min_slope_point;
  bool slope_ok = false;   // min_slope >= 1 - 1e-6
  bool ok = false;
};

/// f1 = f - <p, .> + 4 |. - center|. Requires p in df(center), |p| < 1, and a passing PLR certificate.
SharpMinReport sharp_min_transform(const Expression& f, const SubdifferentialOracle& oracle, const Vector& center,
                                   double c, double delta, const Vector& p, const PlrSampling& sampling = {});

struct SeriesReport {
  double c = 0.0;
  double s = 0.0;      // sum of a
  double b = 0.0;      // max{b_0, 1}
  double bound = 0.0;  // (b + 2c(2 + b)s) e^{6cs}
  bool hypothesis_ok = false;
  std::optional<std::size_t> hypothesis_violation;  // first n with b_{n+1} - b_n >= 2c(2 + b_n) a_n
  bool bound_ok = false;
  std::optional<std::size_t> bound_violation;
  double max_b = 0.0;
};

/// Checks the series hypothesis index by index and, when it holds, b_n < bound for n >= 1 with
/// b_n > 1 and b_n <= bound elsewhere.
SeriesReport verify_series_bound(std::span<const double> a, std::span<const double> b, double c);

struct RepresentationStep {
  int n = 0;
  bool in_range = false;  // n > 1/r
  double r_n = 0.0;
  double eps_n = 0.0;
  double inf_value = 0.0;  // inf (f + g_n) with f normalized so f(x_bar) = 0
  PointIndex x_n = 0;
  double distance = 0.0;
  double quotient = 0.0;   // (f(x_bar) - f(x_n)) / d(x_bar, x_n)
  double slope = 0.0;      // slope source at x_n
  bool quotient_ok = false;
  bool distance_ok = false;
  bool gap_ok = false;
};

struct RepresentationReport {
  double r = 0.0;
  double c = 0.0;
  std::vector<RepresentationStep> steps;
  bool ok = false;
};

/// For each n in [n_min, n_max]: g_n = r_n d(., x_bar) + c(r + 2) d^2(., x_bar),
/// x_n from slope_perturbed_min on f + g_n with eps_n = min{1/(2n), |inf(f + g_n)|/2}.
RepresentationReport representation_sequence(const ScalarField& f, std::span<const ExtReal> slopes, PointIndex x_bar,
                                              double c, int n_min, int n_max);

}  // namespace plrkit
