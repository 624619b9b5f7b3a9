#include "plrkit/plr.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "plrkit/errors.hpp"
#include "plrkit/io.hpp"
#include "plrkit/kernels.hpp"
#include "plrkit/parallel.hpp"
#include "plrkit/slope.hpp"

namespace plrkit {

double delta_prime(double c, double delta) { return std::min(delta, 1.0 / (9.0 * c)); }
double c_prime(double c) { return 6.0 * c; }
double delta_hat(double c, double delta) { return std::min(delta / 2.0, 1.0 / (18.0 * c)); }

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) { return seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)); }

// One anchor per stratum of consecutive indices, at a seeded random offset.
std::vector<PointIndex> choose_anchors(std::size_t n, std::size_t limit, std::size_t count, std::uint64_t seed) {
  std::vector<PointIndex> anchors;
  if (n <= limit || count >= n) {
    anchors.resize(n);
    for (std::size_t i = 0; i < n; ++i) anchors[i] = i;
    return anchors;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t lo = k * n / count;
    const std::size_t hi = (k + 1) * n / count;
    std::uniform_int_distribution<std::size_t> pick(lo, hi - 1);
    anchors.push_back(pick(rng));
  }
  return anchors;
}

void check_plr_params(double c, double delta) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("PLR: c must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("PLR: delta must be positive");
}

}  // namespace

std::vector<Vector> subgradient_selection(const ConvexSet& s, int boundary_points, std::uint64_t seed) {
  std::vector<Vector> out(s.generators().begin(), s.generators().end());
  if (s.radius() > 0.0) out.clear();  // generators are interior to a fattened set
  auto add = [&](Vector v) {
    for (const auto& q : out) {
      if ((q - v).norm() == 0.0) return;
    }
    out.push_back(std::move(v));
  };
  if (auto m = min_norm_element(s)) add(*m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < boundary_points; ++k) {
    Vector u(s.dim());
    for (int i = 0; i < s.dim(); ++i) u[i] = gauss(rng);
    if (u.norm() == 0.0) continue;
    add(s.support_point(u));
  }
  if (s.radius() > 0.0) {
    // The generators themselves still matter for the polytope part of the set.
    for (const auto& g : s.generators()) add(g);
  }
  return out;
}

PlrCertificate certify_plr(const Expression& f, const SubdifferentialOracle& oracle, const Vector& center, double c,
                           double delta, const PlrSampling& sampling) {
  check_plr_params(c, delta);
  if (center.size() != f.dim() || oracle.dim() != f.dim()) throw InputError("certify_plr: dimension mismatch");
  PlrCertificate cert{f, oracle, center, c, delta, sampling};

  const double spacing = sampling.spacing > 0.0 ? sampling.spacing : delta / 20.0;
  auto grid = open_ball_grid(center, delta, spacing);
  const std::size_t m = grid->size();
  std::vector<double> fy(m);
  for (PointIndex j = 0; j < m; ++j) fy[j] = f(grid->point(j));
  std::vector<const double*> coords;
  for (int k = 0; k < f.dim(); ++k) coords.push_back(grid->coordinate(k).data());
  const kernels::PointBlock block{coords, m};

  const auto anchors = choose_anchors(m, sampling.exhaustive_limit, sampling.anchors, sampling.seed);
  struct AnchorResult {
    double margin = std::numeric_limits<double>::infinity();
    PointIndex y = 0;
    Vector p;
    std::size_t pairs = 0;
  };
  std::vector<AnchorResult> results(anchors.size());
  parallel_for(anchors.size(), [&](std::size_t a) {
    const PointIndex i = anchors[a];
    const Vector x = grid->point(i);
    const ConvexSet s = oracle(x);
    if (s.is_empty()) throw CoverageError("certify_plr: empty subdifferential at " + grid->label(i));
    AnchorResult& r = results[a];
    for (const Vector& p : subgradient_selection(s, sampling.boundary_points, mix_seed(sampling.seed, i))) {
      const double k = c * (1.0 + p.norm());
      const auto best = kernels::active().min_plr_margin(block, fy.data(), x.data(), fy[i], p.data(), k);
      r.pairs += m;
      if (best.value < r.margin) {
        r.margin = best.value;
        r.y = best.index;
        r.p = p;
      }
    }
  });

  cert.points = m;
  cert.anchors = anchors.size();
  cert.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const AnchorResult& r = results[a];
    cert.pairs += r.pairs;
    if (r.margin < -sampling.tolerance) {
      PlrViolation v{grid->point(anchors[a]), grid->point(r.y), r.p, r.margin};
      if (cert.violations.size() < sampling.max_violations) cert.violations.push_back(v);
      if (!cert.worst || r.margin < cert.worst->margin) cert.worst = v;
    }
    cert.worst_margin = std::min(cert.worst_margin, r.margin);
  }
  cert.pass = !cert.worst.has_value();
  return cert;
}

PlrCertificate certify_plr(const Expression& f, const Vector& center, double c, double delta,
                           const PlrSampling& sampling) {
  return certify_plr(f, SubdifferentialOracle::of(f), center, c, delta, sampling);
}

PlrCertificate scale_plr(const PlrCertificate& cert, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("scale_plr: alpha must lie in (0, 1)");
  const SubdifferentialOracle& base = cert.oracle;
  SubdifferentialOracle scaled(
      base.dim(), [base, alpha](const Vector& x) { return base(x).scaled(alpha); }, base.provenance(),
      base.lipschitz(), base.f_regular());
  return certify_plr(cert.f.scaled(alpha), scaled, cert.center, cert.c, cert.delta, cert.sampling);
}

AddConvexResult add_convex_plr(const PlrCertificate& cert, const Expression& h) {
  if (!h.convex()) throw InputError("add_convex_plr: h must be convex");
  if (h.dim() != cert.f.dim()) throw InputError("add_convex_plr: dimension mismatch");
  const double lipschitz = h.lipschitz_bound(cert.center, cert.delta);
  const double coefficient = cert.c * (lipschitz + 1.0);
  const auto oracle = sum_oracle(cert.oracle, SubdifferentialOracle::of(h, "h"));
  return AddConvexResult{certify_plr(cert.f.plus(h), oracle, cert.center, coefficient, cert.delta, cert.sampling),
                         lipschitz, coefficient};
}

RegularSlopeCertificate certify_regular_slope(const ScalarField& f, std::span<const ExtReal> slopes, double c,
                                              const RegularSlopeOptions& options) {
  if (!(c > 0.0)) throw InputError("certify_regular_slope: c must be positive");
  if (slopes.size() != f.size()) throw InputError("certify_regular_slope: one slope per point required");
  const MetricSpace& space = f.space();
  const std::size_t n = f.size();
  RegularSlopeCertificate cert;
  cert.c = c;
  cert.tolerance = options.tolerance;

  std::vector<PointIndex> eligible;
  for (PointIndex i = 0; i < n; ++i) {
    if (f.finite(i) && slopes[i].is_finite()) {
      eligible.push_back(i);
    } else {
      ++cert.skipped;
    }
  }
  const auto picks = choose_anchors(eligible.size(), options.exhaustive_limit, options.anchors, options.seed);
  std::vector<kernels::ArgBest> results(picks.size());
  parallel_for(picks.size(), [&](std::size_t a) {
    const PointIndex x = eligible[picks[a]];
    std::vector<double> d(n);
    space.distances_from(x, d);
    const double s = slopes[x].value();
    results[a] = kernels::active().min_slope_margin(f.raw()[x], f.raw().data(), d.data(), s, c * (1.0 + s), n);
  });
  cert.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < picks.size(); ++a) {
    cert.pairs += n;
    const auto& r = results[a];
    cert.worst_margin = std::min(cert.worst_margin, r.value);
    if (r.value < -options.tolerance) {
      RegularSlopeViolation v{eligible[picks[a]], r.index, r.value};
      if (cert.violations.size() < options.max_violations) cert.violations.push_back(v);
      if (!cert.worst || r.value < cert.worst->margin) cert.worst = v;
    }
  }
  cert.pass = !cert.worst.has_value();
  return cert;
}

SharpMinReport sharp_min_transform(const Expression& f, const SubdifferentialOracle& oracle, const Vector& center,
                                   double c, double delta, const Vector& p, const PlrSampling& sampling) {
  check_plr_params(c, delta);
  if (p.size() != f.dim()) throw InputError("sharp_min_transform: p has the wrong dimension");
  if (!(p.norm() < 1.0)) throw PreconditionError("sharp_min_transform: |p| must be < 1", format_double(p.norm()));
  if (!oracle(center).contains(p)) {
    throw PreconditionError("sharp_min_transform: p is not a subgradient at the center", "p");
  }
  const PlrCertificate cert = certify_plr(f, oracle, center, c, delta, sampling);
  if (!cert.pass) {
    std::string witness = "x=[";
    for (Eigen::Index i = 0; i < cert.worst->x.size(); ++i) witness += (i ? "," : "") + format_double(cert.worst->x[i]);
    throw PreconditionError("sharp_min_transform: PLR certificate failed", witness + "]");
  }

  SharpMinReport rep;
  rep.plr_pass = true;
  rep.c_prime = c_prime(c);
  rep.delta_prime = delta_prime(c, delta);
  const Expression h(f.dim(), {WeightedTerm{1.0, LinearTerm{-p}}, WeightedTerm{4.0, NormTerm{center}}});
  rep.f1 = f.plus(h);
  const auto f1_oracle = sum_oracle(oracle, SubdifferentialOracle::of(h, "h"));

  auto grid = open_ball_grid(center, rep.delta_prime, rep.delta_prime / 40.0);
  rep.sampled = grid->size();
  rep.f1_at_center = rep.f1(center);
  std::vector<double> values(grid->size());
  std::vector<double> slopes(grid->size(), std::numeric_limits<double>::infinity());
  parallel_for(grid->size(), [&](std::size_t i) {
    const Vector x = grid->point(i);
    values[i] = rep.f1(x);
    if ((x - center).norm() > 0.0) slopes[i] = slope_from_subdifferential(f1_oracle, x).value_or(slopes[i]);
  });
  rep.min_sampled_f1 = *std::min_element(values.begin(), values.end());
  rep.center_is_min = rep.f1_at_center <= rep.min_sampled_f1;
  const auto arg = std::min_element(slopes.begin(), slopes.end()) - slopes.begin();
  rep.min_slope = slopes[static_cast<std::size_t>(arg)];
  rep.min_slope_point = grid->point(static_cast<PointIndex>(arg));
  rep.slope_ok = rep.min_slope >= 1.0 - 1e-6;
  rep.ok = rep.center_is_min && rep.slope_ok;
  return rep;
}

SeriesReport verify_series_bound(std::span<const double> a, std::span<const double> b, double c) {
  if (!(c > 0.0)) throw InputError("series: c must be positive");
  if (b.empty()) throw InputError("series: b must be nonempty");
  if (a.size() + 1 < b.size()) throw InputError("series: need a_n for every step of b");
  for (double v : a) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("series: a_n must be finite and >= 0");
  }
  for (double v : b) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("series: b_n must be finite and > 0");
  }
  SeriesReport rep;
  rep.c = c;
  for (double v : a) rep.s += v;
  rep.b = std::max(b[0], 1.0);
  rep.bound = (rep.b + 2.0 * c * (2.0 + rep.b) * rep.s) * std::exp(6.0 * c * rep.s);
  rep.hypothesis_ok = true;
  for (std::size_t n = 0; n + 1 < b.size(); ++n) {
    if (!(b[n + 1] - b[n] < 2.0 * c * (2.0 + b[n]) * a[n])) {
      rep.hypothesis_ok = false;
      rep.hypothesis_violation = n;
      break;
    }
  }
  rep.max_b = *std::max_element(b.begin(), b.end());
  if (!rep.hypothesis_ok) return rep;
  rep.bound_ok = true;
  for (std::size_t n = 0; n < b.size(); ++n) {
    // Strict only where b_n > 1 past the start; elsewhere b_n <= max{b_0, 1} <= bound.
    const bool strict = n > 0 && b[n] > 1.0;
    if (strict ? !(b[n] < rep.bound) : !(b[n] <= rep.bound)) {
      rep.bound_ok = false;
      rep.bound_violation = n;
      break;
    }
  }
  return rep;
}

RepresentationReport representation_sequence(const ScalarField& f, std::span<const ExtReal> slopes, PointIndex x_bar,
                                              double c, int n_min, int n_max) {
  const MetricSpace& space = f.space();
  space.check_index(x_bar);
  if (!(c > 0.0)) throw InputError("representation_sequence: c must be positive");
  if (slopes.size() != f.size()) throw InputError("representation_sequence: one slope per point required");
  if (n_min < 1 || n_max < n_min) throw InputError("representation_sequence: bad index range");
  const ExtReal& r_ext = slopes[x_bar];
  if (r_ext.is_infinite() || !(r_ext.value() > 0.0)) {
    throw PreconditionError("representation_sequence: slope at x_bar must be finite and positive",
                            space.label(x_bar));
  }
  RepresentationReport rep;
  rep.r = r_ext.value();
  rep.c = c;
  const double r = rep.r;
  const ScalarField F = f.shifted(-f.value(x_bar));
  std::vector<double> dbar(space.size());
  space.distances_from(x_bar, dbar);

  rep.ok = true;
  for (int n = n_min; n <= n_max; ++n) {
    RepresentationStep st;
    st.n = n;
    st.r_n = r - 1.0 / n;
    st.in_range = n > 1.0 / r;
    if (!st.in_range) {
      rep.steps.push_back(st);
      continue;
    }
    std::vector<ExtReal> gv;
    gv.reserve(space.size());
    for (double d : dbar) gv.emplace_back(st.r_n * d + c * (r + 2.0) * d * d);
    const ScalarField gn(f.space_ptr(), std::move(gv));
    const ScalarField sum = F.plus(gn);
    st.inf_value = sum.value(sum.argmin());
    if (!(st.inf_value < 0.0)) {
      // The sample is too coarse to see below the level of x_bar.
      rep.ok = false;
      rep.steps.push_back(st);
      continue;
    }
    st.eps_n = std::min(1.0 / (2.0 * n), std::fabs(st.inf_value) / 2.0);
    const PerturbedMinReport pm = slope_perturbed_min(F, gn, st.eps_n);
    st.x_n = pm.x_eps;
    st.distance = dbar[st.x_n];
    st.quotient = -F.value(st.x_n) / st.distance;
    st.slope = slopes[st.x_n].value_or(std::numeric_limits<double>::infinity());
    st.quotient_ok = st.quotient > st.r_n;
    st.distance_ok = st.distance < 1.0 / (c * n);
    st.gap_ok = st.slope - r < 2.0 * c * (r + 2.0) * st.distance;
    rep.ok = rep.ok && st.quotient_ok && st.distance_ok && st.gap_ok;
    rep.steps.push_back(st);
  }
  return rep;
}

}  // namespace plrkit
