#include "plrkit/determination.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "plrkit/errors.hpp"
#include "plrkit/parallel.hpp"
#include "plrkit/slope.hpp"

namespace plrkit {

namespace {

const char* const kBuiltinInstances = R"json([
  {"id": "neg_sq_a0", "description": "smooth nonconvex, identical functions",
   "f": {"dim": 2, "terms": [{"type": "quadratic", "diag": [-2, -2]}]},
   "g": {"dim": 2, "terms": [{"type": "quadratic", "diag": [-2, -2]}]},
   "x_bar": [0, 0], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": true, "a": 0}},
  {"id": "saddle_shift_1", "description": "smooth saddle shifted by 1",
   "f": {"dim": 2, "terms": [{"type": "quadratic", "diag": [2, -2]}], "constant": 1},
   "g": {"dim": 2, "terms": [{"type": "quadratic", "diag": [2, -2]}]},
   "x_bar": [0.1, -0.2], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": true, "a": 1}},
  {"id": "shift_2p5", "description": "smooth concave paraboloid shifted by 2.5",
   "f": {"dim": 2, "terms": [{"type": "quadratic", "diag": [-2, -2]}], "constant": 2.5},
   "g": {"dim": 2, "terms": [{"type": "quadratic", "diag": [-2, -2]}]},
   "x_bar": [0.3, 0.1], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": true, "a": 2.5}},
  {"id": "convex_l1_m3", "description": "l1 norm shifted by -3, kink at the center",
   "f": {"dim": 2, "terms": [{"type": "l1"}], "constant": -3},
   "g": {"dim": 2, "terms": [{"type": "l1"}]},
   "x_bar": [0, 0], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": true, "a": -3}},
  {"id": "convex_norm_quad_1", "description": "norm plus quadratic shifted by 1",
   "f": {"dim": 2, "terms": [{"type": "norm"}, {"type": "quadratic", "diag": [1, 1]}], "constant": 1},
   "g": {"dim": 2, "terms": [{"type": "norm"}, {"type": "quadratic", "diag": [1, 1]}]},
   "x_bar": [0, 0], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": true, "a": 1}},
  {"id": "composite_m3", "description": "max(0, |x|^2 - 1) + |x|^2 near the shell, shifted by -3",
   "f": {"dim": 2, "terms": [{"type": "positive_part", "diag": [2, 2], "b": -1},
                             {"type": "quadratic", "diag": [2, 2]}], "constant": -3},
   "g": {"dim": 2, "terms": [{"type": "positive_part", "diag": [2, 2], "b": -1},
                             {"type": "quadratic", "diag": [2, 2]}]},
   "x_bar": [0.95, 0], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": true, "a": -3}},
  {"id": "neg_scaled", "description": "negative control: g = 2f",
   "f": {"dim": 2, "terms": [{"type": "quadratic", "diag": [1, 1]}]},
   "g": {"dim": 2, "terms": [{"type": "quadratic", "diag": [2, 2]}]},
   "x_bar": [0, 0], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": false}},
  {"id": "neg_perturbed_kink", "description": "negative control: kink moved to x1 = 0.05",
   "f": {"dim": 2, "terms": [{"type": "l1"}]},
   "g": {"dim": 2, "terms": [{"type": "l1", "center": [0.05, 0]}]},
   "x_bar": [0, 0], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": false}},
  {"id": "neg_shifted_argument", "description": "negative control: g(x) = f(x - (0.1, 0))",
   "f": {"dim": 2, "terms": [{"type": "quadratic", "diag": [-2, -2]}]},
   "g": {"dim": 2, "terms": [{"type": "quadratic", "diag": [-2, -2], "center": [0.1, 0]}]},
   "x_bar": [0, 0], "c": 1, "delta": 1, "expect": {"equal_up_to_constant": false}}
])json";

double positive(double v) { return v > 0.0 ? v : 0.0; }

std::string vector_label(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s + "]";
}

}  // namespace

DeterminationInstance DeterminationInstance::from_json(const json& j, const std::string& where) {
  require_keys(j, {"id", "description", "f", "g", "x_bar", "c", "delta", "expect"}, where);
  DeterminationInstance inst;
  if (!j.contains("id") || !j.at("id").is_string()) throw InputError(where + ": 'id' must be a string");
  inst.id = j.at("id").get<std::string>();
  if (j.contains("description")) {
    if (!j.at("description").is_string()) throw InputError(where + ": 'description' must be a string");
    inst.description = j.at("description").get<std::string>();
  }
  for (const char* key : {"f", "g", "expect"}) {
    if (!j.contains(key)) throw InputError(where + ": missing '" + key + "'");
  }
  inst.f = expression_from_json(j.at("f"));
  inst.g = expression_from_json(j.at("g"));
  if (inst.f.dim() != inst.g.dim()) throw InputError(where + ": f and g have different dimensions");
  inst.x_bar = get_vector(j, "x_bar", where);
  if (inst.x_bar.size() != inst.f.dim()) throw InputError(where + ": x_bar has the wrong dimension");
  inst.c = get_number(j, "c", where);
  inst.delta = get_number(j, "delta", where);
  if (!(inst.c > 0.0) || !(inst.delta > 0.0)) throw InputError(where + ": c and delta must be positive");
  const json& e = j.at("expect");
  require_keys(e, {"equal_up_to_constant", "a"}, where + ".expect");
  if (!e.contains("equal_up_to_constant") || !e.at("equal_up_to_constant").is_boolean()) {
    throw InputError(where + ".expect: 'equal_up_to_constant' must be a boolean");
  }
  inst.expect_equal = e.at("equal_up_to_constant").get<bool>();
  if (e.contains("a")) inst.expected_a = get_number(e, "a", where + ".expect");
  return inst;
}

DeterminationInstance DeterminationInstance::load(const std::string& path) {
  return from_json(read_json_file(path), path);
}

const std::vector<DeterminationInstance>& DeterminationInstance::builtin() {
  static const std::vector<DeterminationInstance> all = [] {
    const json j = parse_json(kBuiltinInstances, "builtin instances");
    std::vector<DeterminationInstance> out;
    for (const auto& e : j) out.push_back(from_json(e));
    return out;
  }();
  return all;
}

const DeterminationInstance& DeterminationInstance::builtin(const std::string& id) {
  for (const auto& inst : builtin()) {
    if (inst.id == id) return inst;
  }
  throw InputError("unknown instance '" + id + "'");
}

json to_json(const DeterminationInstance& inst) {
  json expect{{"equal_up_to_constant", inst.expect_equal}};
  if (inst.expected_a) expect["a"] = *inst.expected_a;
  json j{{"id", inst.id},
         {"f", expression_to_json(inst.f)},
         {"g", expression_to_json(inst.g)},
         {"x_bar", vector_to_json(inst.x_bar)},
         {"c", inst.c},
         {"delta", inst.delta},
         {"expect", expect}};
  if (!inst.description.empty()) j["description"] = inst.description;
  return j;
}

EqualityReport verify_subdifferential_equality(const SubdifferentialOracle& of, const SubdifferentialOracle& og,
                                               const Vector& x_bar, double delta, const EqualityOptions& options) {
  if (of.dim() != og.dim() || x_bar.size() != of.dim()) throw InputError("equality gate: dimension mismatch");
  if (!(delta > 0.0)) throw InputError("equality gate: delta must be positive");
  const double spacing = options.spacing > 0.0 ? options.spacing : delta / 25.0;
  auto grid = open_ball_grid(x_bar, delta, spacing);
  std::vector<Vector> dirs = direction_fan(of.dim(), options.fan);
  for (int i = 0; i < of.dim(); ++i) {
    for (double s : {1.0, -1.0}) dirs.push_back(s * Vector::Unit(of.dim(), i));
  }

  std::vector<std::optional<EqualityWitness>> found(grid->size());
  parallel_for(grid->size(), [&](std::size_t i) {
    const Vector x = grid->point(i);
    const ConvexSet sf = of(x);
    const ConvexSet sg = og(x);
    if (sf.is_empty() || sg.is_empty()) {
      throw CoverageError("equality gate: empty subdifferential at " + grid->label(i));
    }
    for (const Vector& u : dirs) {
      const double a = sf.support(u);
      const double b = sg.support(u);
      if (std::fabs(a - b) > options.tolerance) {
        found[i] = EqualityWitness{x, u, a, b};
        return;
      }
    }
  });

  EqualityReport rep;
  rep.points = grid->size();
  rep.directions = dirs.size();
  for (auto& w : found) {
    if (w) {
      rep.witness = std::move(w);
      break;
    }
  }
  rep.equal = !rep.witness.has_value();
  return rep;
}

CoreReport slope_determination_core(const ScalarField& f1, const ScalarField& g1,
                                    std::span<const ExtReal> regular_slopes, std::span<const ExtReal> slope_f1,
                                    std::span<const ExtReal> slope_g1, double c, PointIndex x_bar, PointIndex x0,
                                    const CoreOptions& options) {
  const MetricSpace& space = f1.space();
  if (&g1.space() != &space) throw InputError("core: f1 and g1 live on different spaces");
  const std::size_t n = space.size();
  if (regular_slopes.size() != n || slope_f1.size() != n || slope_g1.size() != n) {
    throw InputError("core: one slope per point required");
  }
  space.check_index(x_bar);
  space.check_index(x0);
  if (!(options.gap > 0.0)) throw InputError("core: gap must be positive");

  const ScalarField F1 = f1.shifted(-f1.value(x_bar));
  const ScalarField G1 = g1.shifted(-g1.value(x_bar));
  CoreReport rep;

  RegularSlopeOptions reg;
  reg.tolerance = options.regular_tolerance;
  rep.regular = certify_regular_slope(F1, regular_slopes, c, reg);

  rep.slope_domination_ok = true;
  for (PointIndex i = 0; i < n; ++i) {
    if (slope_g1[i] > slope_f1[i] + options.slope_tolerance) {
      rep.slope_domination_ok = false;
      rep.slope_domination_witness = i;
      break;
    }
  }

  RegularSlopeOptions mixed;
  mixed.tolerance = options.mixed_slack;
  rep.mixed = certify_regular_slope(G1, slope_f1, c, mixed);

  rep.gap_ok = true;
  for (PointIndex i = 0; i < n; ++i) {
    if (i != x_bar && slope_f1[i].is_finite() && !(slope_f1[i].value() > options.gap)) {
      rep.gap_ok = false;
      rep.gap_witness = i;
      break;
    }
  }

  if (!rep.regular.pass) {
    rep.failure = "f1 is not regularly sloped at " + space.label(rep.regular.worst->x);
  } else if (!rep.slope_domination_ok) {
    rep.failure = "|grad g1| exceeds |grad f1| at " + space.label(*rep.slope_domination_witness);
  } else if (!rep.mixed.pass) {
    rep.failure = "mixed inequality fails at " + space.label(rep.mixed.worst->x);
  } else if (!rep.gap_ok) {
    rep.failure = "sharp-minimum gap fails at " + space.label(*rep.gap_witness);
  }
  if (!rep.gap_ok) return rep;

  bool all_ok = true;
  for (double dil : options.dilations) {
    if (!(dil > 0.0)) throw InputError("core: dilations must be positive");
    DilationRun run;
    run.dilation = dil;
    const double scale = 1.0 + dil;
    const ScalarField Fd = F1.scaled(scale);
    std::vector<ExtReal> sd;
    sd.reserve(n);
    for (PointIndex i = 0; i < n; ++i) sd.push_back(slope_f1[i].scaled(scale));
    const double cd = scale * c;
    // Slopes of f_d are (1 + d) times those of f1, so its verified gap is (1 + d) gap.
    const double gap_d = scale * options.gap;
    const MultiMap S = build_determination_map(Fd, G1, sd, gap_d, cd, x_bar);

    run.star = check_star_property(space, S);
    run.orbit = run_orbit(space, S, x0);
    run.ends_at_min = run.orbit.termination == Termination::empty_s && run.orbit.points.back() == x_bar;
    run.membership_failure = verify_orbit(S, run.orbit);
    run.length = orbit_length_bound(run.orbit, Fd, gap_d);
    run.sharp_bound = F1.value(x0) / options.gap;

    run.s1_monotone = true;
    for (std::size_t k = 0; k + 1 < run.orbit.points.size(); ++k) {
      const PointIndex a = run.orbit.points[k];
      const PointIndex b = run.orbit.points[k + 1];
      if (!(Fd.value(b) - G1.value(b) < Fd.value(a) - G1.value(a))) {
        run.s1_monotone = false;
        break;
      }
    }

    std::vector<double> bs;
    for (PointIndex p : run.orbit.points) {
      if (!sd[p].is_finite() || !(sd[p].value() > 0.0)) break;
      bs.push_back(sd[p].value());
    }
    if (bs.empty()) {
      run.series_ok = true;
    } else {
      run.series = verify_series_bound(run.orbit.steps, bs, cd);
      run.series_ok = run.series.hypothesis_ok && run.series.bound_ok;
    }

    run.min_conclusion = std::numeric_limits<double>::infinity();
    for (PointIndex y = 0; y < n; ++y) {
      if (!Fd.finite(y) || !G1.finite(y)) continue;
      const double v = Fd.value(y) - G1.value(y);
      if (v < run.min_conclusion) {
        run.min_conclusion = v;
        if (v < -options.conclusion_tolerance) run.conclusion_witness = y;
      }
    }
    if (!(run.min_conclusion < -options.conclusion_tolerance)) run.conclusion_witness.reset();

    run.ok = run.star.pass && run.ends_at_min && !run.membership_failure && run.length.ok &&
             run.orbit.length <= run.sharp_bound && run.s1_monotone && run.series_ok && !run.conclusion_witness;
    if (!run.ok && rep.failure.empty()) {
      rep.failure = "dilation " + format_double(dil) + ": orbit from " + space.label(x0) + " ended at " +
                    space.label(run.orbit.points.back()) + " (" + to_string(run.orbit.termination) + ")";
    }
    all_ok = all_ok && run.ok;
    rep.dilations.push_back(std::move(run));
  }
  rep.ok = rep.failure.empty() && all_ok;
  return rep;
}

OneSidedReport run_one_sided(const Expression& f, const Expression& g, const Vector& x_bar, double c, double delta,
                             const Vector& center, const Vector& target, const DeterminationSampling& sampling,
                             const std::string& direction) {
  const int dim = f.dim();
  if (g.dim() != dim || x_bar.size() != dim || center.size() != dim || target.size() != dim) {
    throw InputError("one-sided run: dimension mismatch");
  }
  if (!(c > 0.0) || !(delta > 0.0)) throw InputError("one-sided run: c and delta must be positive");
  OneSidedReport rep;
  rep.direction = direction;
  rep.center = center;
  rep.target = target;
  const double off = (center - x_bar).norm();
  if (!(off < delta)) throw InputError("one-sided run: center outside the PLR ball");
  rep.delta_c = delta - off;
  rep.delta_prime = delta_prime(c, rep.delta_c);
  rep.h = sampling.h;
  rep.eps = sampling.eps_factor * sampling.h;
  if (!(rep.h > 0.0) || !(rep.h < rep.delta_prime)) throw InputError("one-sided run: need 0 < h < delta'");
  if (!((target - center).norm() < rep.delta_prime)) throw InputError("one-sided run: target outside the delta'-ball");
  rep.tolerance = 10.0 * (rep.eps + rep.h) * (1.0 + f.lipschitz_bound(x_bar, delta));

  auto grid = open_ball_grid(center, rep.delta_prime, rep.h);
  const PointIndex x0 = grid->nearest(target);
  const PointIndex ci = grid->nearest(center);
  rep.x0 = grid->point(x0);
  const double r0 = (rep.x0 - center).norm();
  rep.margin = (f(rep.x0) - g(rep.x0)) - (f(center) - g(center));
  rep.margin_ok = rep.margin >= -rep.tolerance;

  rep.nu = (rep.delta_prime - r0) / 2.0;
  const Expression F = f.shifted(-f(center));
  const Expression G = g.shifted(-g(center));
  const ExtReal sF = slope_from_subdifferential(SubdifferentialOracle::of(F), center);
  if (sF.is_infinite()) {
    rep.failure = "center outside dom |grad f|";
    return rep;
  }
  double inf_F = std::numeric_limits<double>::infinity();
  {
    const EuclideanGrid closed(GridSpec{dim, center, rep.delta_prime, rep.h});
    for (PointIndex i = 0; i < closed.size(); ++i) inf_F = std::min(inf_F, F(closed.point(i)));
  }
  const double F_x0 = F(rep.x0);
  const double cap = std::min(1.0, rep.nu / rep.delta_prime);
  auto admissible = [&](double a) { return a * sF.value() < cap && a * inf_F > -rep.nu && a * F_x0 < rep.nu; };
  double lo = 0.0;
  double hi = 1.0;
  if (admissible(1.0)) {
    lo = 1.0;
  } else {
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (admissible(mid) ? lo : hi) = mid;
    }
  }
  rep.alpha_max = lo;
  rep.alpha = 0.5 * lo;
  rep.alpha_ok = rep.alpha > 0.0 && admissible(rep.alpha);
  if (!rep.alpha_ok) {
    rep.failure = "alpha search failed: hypothesis-scale mismatch";
    return rep;
  }

  const Expression aF = F.scaled(rep.alpha);
  const Expression aG = G.scaled(rep.alpha);
  const auto oaF = SubdifferentialOracle::of(aF, "alpha f");
  rep.p = *min_norm_element(oaF(center));
  try {
    rep.sharp = sharp_min_transform(aF, oaF, center, c, rep.delta_c, rep.p, sampling.plr);
  } catch (const PreconditionError& e) {
    rep.failure = std::string("sharp-minimum transform: ") + e.what() + " at " + e.witness();
    return rep;
  }
  const Expression hx(dim, {WeightedTerm{1.0, LinearTerm{-rep.p}}, WeightedTerm{4.0, NormTerm{center}}});
  const Expression& f1 = rep.sharp.f1;
  const Expression g1 = aG.plus(hx);

  const ScalarField f1_grid = tabulate(f1, grid);
  const ScalarField g1_grid = tabulate(g1, grid);
  const SublevelRestriction Y = sublevel_restrict(f1_grid, x0);
  rep.y_points = Y.space->size();
  rep.y_bounded = true;
  for (PointIndex parent : Y.parent_index) {
    if ((grid->point(parent) - center).norm() > rep.nu + r0 + 1e-12) rep.y_bounded = false;
  }
  const auto x_bar_local = Y.local_index(ci);
  const auto x0_local = Y.local_index(x0);
  if (!x_bar_local || !x0_local) {
    rep.failure = "sublevel set misses the center";
    return rep;
  }
  const auto y_grid = std::dynamic_pointer_cast<const EuclideanGrid>(Y.space);
  const ScalarField g1_y = g1_grid.restricted(Y.space, Y.parent_index);

  const auto f1_oracle = sum_oracle(oaF, SubdifferentialOracle::of(hx, "h"));
  const std::vector<ExtReal> regular = analytic_slopes(f1_oracle, *y_grid);
  std::vector<ExtReal> sf1;
  std::vector<ExtReal> sg1;
  for (const auto& e : discrete_slopes(Y.field, rep.eps)) sf1.push_back(e.value);
  for (const auto& e : discrete_slopes(g1_y, rep.eps)) sg1.push_back(e.value);

  CoreOptions core = sampling.core;
  core.mixed_slack = 10.0 * (rep.eps + rep.h) * (1.0 + f1.lipschitz_bound(center, rep.delta_prime)) * rep.delta_prime;
  try {
    rep.core = slope_determination_core(Y.field, g1_y, regular, sf1, sg1, c_prime(c), *x_bar_local, *x0_local, core);
  } catch (const PreconditionError& e) {
    rep.failure = std::string("core: ") + e.what() + " at " + e.witness();
    return rep;
  }

  if (!rep.y_bounded) {
    rep.failure = "sublevel set leaves the (nu + |x0|)-ball";
  } else if (!rep.sharp.ok) {
    rep.failure = "f1 does not have a sharp minimum at the center";
  } else if (!rep.core.ok) {
    rep.failure = rep.core.failure;
  } else if (!rep.margin_ok) {
    rep.failure = "final inequality fails by " + format_double(-rep.margin);
  }
  rep.ok = rep.failure.empty();
  return rep;
}

std::vector<Vector> determination_centers(const Vector& x_bar, double delta_hat, int extra) {
  std::vector<Vector> out{x_bar};
  const auto dim = x_bar.size();
  for (int k = 0; k < extra; ++k) {
    Vector u(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      u[i] = 0.7 * std::sin(1.3 + 2.1 * k + 0.9 * static_cast<double>(i)) / std::sqrt(static_cast<double>(dim));
    }
    out.push_back(x_bar + delta_hat * u);
  }
  return out;
}

DeterminationReport run_determination(const DeterminationInstance& inst, const DeterminationSampling& sampling) {
  DeterminationReport rep;
  rep.id = inst.id;
  rep.c = inst.c;
  rep.delta = inst.delta;
  rep.c_prime = c_prime(inst.c);
  rep.delta_prime = delta_prime(inst.c, inst.delta);
  rep.delta_hat = delta_hat(inst.c, inst.delta);
  rep.h = sampling.h;
  rep.eps = sampling.eps_factor * sampling.h;
  rep.expect_equal = inst.expect_equal;
  rep.expected_a = inst.expected_a;

  const auto of = SubdifferentialOracle::of(inst.f, "f");
  const auto og = SubdifferentialOracle::of(inst.g, "g");
  const PlrCertificate cf = certify_plr(inst.f, of, inst.x_bar, inst.c, inst.delta, sampling.plr);
  const PlrCertificate cg = certify_plr(inst.g, og, inst.x_bar, inst.c, inst.delta, sampling.plr);
  rep.plr_f = cf.pass;
  rep.plr_g = cg.pass;
  if (!cf.pass) rep.plr_witness = cf.worst;
  if (cf.pass && !cg.pass) rep.plr_witness = cg.worst;
  rep.gate = verify_subdifferential_equality(of, og, inst.x_bar, inst.delta, sampling.gate);

  if (!inst.expect_equal) {
    rep.pass = !rep.gate.equal && rep.gate.witness.has_value();
    if (!rep.pass) rep.failure = "negative control passed the subdifferential-equality gate";
    return rep;
  }
  if (!rep.plr_f || !rep.plr_g) {
    rep.failure = std::string("PLR certificate failed for ") + (rep.plr_f ? "g" : "f") + " at x=" +
                  vector_label(rep.plr_witness->x);
    return rep;
  }
  if (!rep.gate.equal) {
    rep.failure = "subdifferential-equality gate rejected the pair at x=" + vector_label(rep.gate.witness->x);
    return rep;
  }
  rep.ran = true;

  const double lf = inst.f.lipschitz_bound(inst.x_bar, inst.delta);
  const double lg = inst.g.lipschitz_bound(inst.x_bar, inst.delta);
  rep.a = inst.f(inst.x_bar) - inst.g(inst.x_bar);
  rep.a_ok = !inst.expected_a || std::fabs(rep.a - *inst.expected_a) <= 1e-9 * (1.0 + std::fabs(rep.a));
  rep.tolerance = 10.0 * (rep.eps + rep.h) * (1.0 + lf);

  auto sample = open_ball_grid(inst.x_bar, rep.delta_hat, std::min(rep.h, rep.delta_hat));
  rep.samples.resize(sample->size());
  parallel_for(sample->size(), [&](std::size_t i) {
    SampleRow& row = rep.samples[i];
    row.x = sample->point(i);
    row.f = inst.f(row.x);
    row.g = inst.g(row.x);
    row.deviation = row.f - row.g - rep.a;
    row.slope_f = slope_from_subdifferential(of, row.x);
    row.slope_g = slope_from_subdifferential(og, row.x);
  });
  double min_all = std::numeric_limits<double>::infinity();
  double min_dom = std::numeric_limits<double>::infinity();
  for (const SampleRow& row : rep.samples) {
    rep.max_deviation = std::max(rep.max_deviation, std::fabs(row.deviation));
    min_all = std::min(min_all, row.f - row.g);
    if (row.slope_f.is_finite()) min_dom = std::min(min_dom, row.f - row.g);
  }
  rep.density_ok = std::fabs(min_all - min_dom) <= rep.tolerance;
  rep.deviation_ok = rep.max_deviation <= rep.tolerance;

  const auto centers = determination_centers(inst.x_bar, rep.delta_hat, sampling.extra_centers);
  rep.two_sided_ok = true;
  double deficit = 0.0;
  bool runs_ok = true;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    // The center x_bar itself is paired with the first off-center point so its orbit is not trivial.
    const Vector& target = (k == 0 && centers.size() > 1) ? centers[1] : inst.x_bar;
    OneSidedReport fg = run_one_sided(inst.f, inst.g, inst.x_bar, inst.c, inst.delta, centers[k], target, sampling,
                                      "f>=g");
    OneSidedReport gf = run_one_sided(inst.g, inst.f, inst.x_bar, inst.c, inst.delta, centers[k], target, sampling,
                                      "g>=f");
    if (std::fabs(fg.margin + gf.margin) > 2.0 * rep.tolerance) rep.two_sided_ok = false;
    deficit = std::max(deficit, positive(-fg.margin) + positive(-gf.margin));
    runs_ok = runs_ok && fg.ok && gf.ok;
    if (rep.failure.empty() && !fg.ok) rep.failure = "f>=g at center " + vector_label(centers[k]) + ": " + fg.failure;
    if (rep.failure.empty() && !gf.ok) rep.failure = "g>=f at center " + vector_label(centers[k]) + ": " + gf.failure;
    rep.runs.push_back(std::move(fg));
    rep.runs.push_back(std::move(gf));
  }
  const double covering = 0.5 * rep.h * std::sqrt(static_cast<double>(inst.x_bar.size()));
  rep.certified_deviation = deficit + (lf + lg) * covering;

  if (rep.failure.empty() && !rep.a_ok) rep.failure = "a differs from the expected constant";
  if (rep.failure.empty() && !rep.deviation_ok) rep.failure = "max |f - g - a| exceeds the tolerance";
  if (rep.failure.empty() && !rep.density_ok) rep.failure = "density surrogate fails";
  if (rep.failure.empty() && !rep.two_sided_ok) rep.failure = "one-sided margins are inconsistent";
  rep.pass = rep.failure.empty() && runs_ok;
  return rep;
}

}  // namespace plrkit
