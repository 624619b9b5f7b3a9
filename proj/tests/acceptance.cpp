// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "plrkit/catalog.hpp"
#include "plrkit/determination.hpp"
#include "plrkit/ekeland.hpp"
#include "plrkit/plr.hpp"
#include "plrkit/slope.hpp"
#include "plrkit/subdifferential.hpp"
#include "support.hpp"

using namespace plrkit;
using plrkit::testing::Gen;
using plrkit::testing::vec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared between criteria 6, 8 and 9 so the h = 1e-2 runs happen once.
std::map<std::pair<std::string, double>, DeterminationReport> g_runs;

const DeterminationReport& determination_at(const DeterminationInstance& inst, double h) {
  const auto key = std::make_pair(inst.id, h);
  auto it = g_runs.find(key);
  if (it == g_runs.end()) {
    DeterminationSampling s;
    s.h = h;
    it = g_runs.emplace(key, run_determination(inst, s)).first;
  }
  return it->second;
}

Outcome constants() {
  const bool ok = delta_prime(1, 1) == 1.0 / 9.0 && c_prime(1) == 6.0 && delta_hat(1, 1) == 1.0 / 18.0;
  return {ok, fmt("delta'=%.17g c'=%.17g delta_hat=%.17g", delta_prime(1, 1), c_prime(1), delta_hat(1, 1))};
}

// Both inequalities by brute force, independent of verify_ekeland.
bool ekeland_holds(const ScalarField& f, PointIndex x0, double lambda, PointIndex xl) {
  const auto& s = f.space();
  if (!(f.value(x0) - f.value(xl) >= lambda * s.distance(xl, x0))) return false;
  for (PointIndex y = 0; y < s.size(); ++y) {
    if (y == xl || !f.finite(y)) continue;
    if (!(f.value(y) + lambda * s.distance(xl, y) > f.value(xl))) return false;
  }
  return true;
}

Outcome ekeland() {
  Gen gen(1001);
  int bad = 0, runs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto space = plrkit::testing::random_finite_space(gen, 2 + gen.index(49));
    const ScalarField f = plrkit::testing::random_field(gen, space);
    for (int k = 0; k < 5; ++k) {
      PointIndex x0 = gen.index(space->size());
      while (!f.finite(x0)) x0 = gen.index(space->size());
      const double lambda = std::exp(gen.uniform(std::log(1e-3), std::log(10.0)));
      const EkelandResult r = ekeland_point(f, x0, lambda);
      ++runs;
      if (!r.check.ok || !ekeland_holds(f, x0, lambda, r.x_lambda)) ++bad;
    }
  }
  return {bad == 0, fmt("%d runs on 200 spaces, %d violations", runs, bad)};
}

Outcome slope_sweep() {
  const double h = 1e-2, eps = 4 * h;
  std::size_t total = 0, within = 0, wild = 0;
  std::string worst_id;
  double worst = 0;
  for (const auto& e : Catalog::builtin().entries()) {
    if (!e.f_regular_flag) continue;  // the min-norm identity needs F-regularity
    const int dim = e.expr.dim();
    const auto grid = plrkit::testing::grid(dim, e.sweep_radius, h, e.sweep_center);
    const ScalarField field = tabulate(e.expr, grid);
    const auto oracle = SubdifferentialOracle::of(e);
    const double L = e.expr.curvature_bound(e.sweep_center, e.sweep_radius);
    const double tol = 5 * (eps + h) * (1 + L);
    const auto discrete = discrete_slopes(field, eps);
    for (PointIndex i = 0; i < grid->size(); ++i) {
      const Vector x = grid->point(i);
      if ((x - e.sweep_center).norm() > e.sweep_radius - eps) continue;
      const double err = std::fabs(discrete[i].value.value() - slope_from_subdifferential(oracle, x).value());
      ++total;
      if (err <= tol) ++within;
      if (err > 10 * tol) ++wild;
      if (err / tol > worst) worst = err / tol, worst_id = e.id;
    }
  }
  const double frac = static_cast<double>(within) / static_cast<double>(total);
  return {frac >= 0.99 && wild == 0,
          fmt("%zu points, %.4f%% within 5(eps+h)(1+L), %zu beyond 10x, worst ratio %.3g (%s)", total, 100 * frac,
              wild, worst, worst_id.c_str())};
}

Outcome plr() {
  int convex = 0, failed = 0;
  std::string first;
  for (const auto& e : Catalog::builtin().entries()) {
    if (!e.expr.convex()) continue;
    ++convex;
    for (double c : {0.1, 1.0, 10.0}) {
      for (double delta : {0.5, 1.0}) {
        if (!certify_plr(e.expr, e.sweep_center, c, delta).pass) {
          ++failed;
          if (first.empty()) first = e.id;
        }
      }
    }
  }
  const auto& neg = Catalog::builtin().at("neg_sq_norm").expr;
  const Vector o = Vector::Zero(2);
  const bool pos = certify_plr(neg, o, 1.0, 1.0).pass;
  const auto fail = certify_plr(neg, o, 0.1, 2.0);
  const bool witnessed = !fail.pass && fail.worst.has_value() && fail.worst->margin < 0;
  std::string w = witnessed ? fmt("witness x=(%.3g,%.3g) y=(%.3g,%.3g) margin %.3g", fail.worst->x[0], fail.worst->x[1],
                                  fail.worst->y[0], fail.worst->y[1], fail.worst->margin)
                            : "no witness";
  return {failed == 0 && pos && witnessed,
          fmt("%d convex entries x 6 parameter pairs, %d failures%s%s; -|x|^2 at c=1: %s; at c=0.1 delta=2: %s",
              convex, failed, first.empty() ? "" : " first ", first.c_str(), pos ? "pass" : "FAIL", w.c_str())};
}

Outcome series() {
  Gen gen(1005);
  int missed_bound = 0, wrong_index = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + gen.index(60);
    const double c = std::exp(gen.uniform(std::log(0.05), std::log(5.0)));
    std::vector<double> a(n), b{gen.uniform(0.01, 5)};
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = gen.coin(0.1) ? 0.0 : gen.uniform(0, 0.1);
      const double room = 2 * c * (2 + b[k]) * a[k];
      // stay strictly below the allowed increase and strictly positive
      b.push_back(gen.coin(0.3) ? b[k] * gen.uniform(0.5, 1.0) : b[k] + gen.uniform(0, 0.999) * room);
      if (!(b[k + 1] - b[k] < room)) b[k + 1] = b[k] * 0.75;
    }
    const auto r = verify_series_bound(a, b, c);
    if (!r.hypothesis_ok || !r.bound_ok) ++missed_bound;
  }
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + gen.index(40);
    const double c = gen.uniform(0.1, 3);
    const std::size_t planted = gen.index(n);
    std::vector<double> a(n), b{gen.uniform(0.1, 3)};
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = gen.uniform(0, 0.1);
      const double room = 2 * c * (2 + b[k]) * a[k];
      b.push_back(k == planted ? b[k] + room * gen.uniform(1.0, 3.0) : b[k] + gen.uniform(0, 0.9) * room);
    }
    const auto r = verify_series_bound(a, b, c);
    if (r.hypothesis_violation != planted) ++wrong_index;
  }
  return {missed_bound == 0 && wrong_index == 0,
          fmt("1000 valid triples, %d outside the bound; 100 planted violations, %d at the wrong index", missed_bound,
              wrong_index)};
}

Outcome sharp_min() {
  int checked = 0, bad = 0;
  double least = std::numeric_limits<double>::infinity();
  std::string where;
  for (const auto& inst : DeterminationInstance::builtin()) {
    if (!inst.expect_equal) continue;
    const auto& rep = determination_at(inst, 1e-2);
    for (const auto& run : rep.runs) {
      if (!run.alpha_ok) {
        ++bad;
        where = inst.id + " (no alpha)";
        continue;
      }
      ++checked;
      const bool ok = run.sharp.min_slope >= 1 - 1e-6 && run.sharp.f1_at_center <= run.sharp.min_sampled_f1;
      if (!ok && where.empty()) where = inst.id + " " + run.direction;
      if (!ok) ++bad;
      least = std::min(least, run.sharp.min_slope);
    }
  }
  return {bad == 0 && checked > 0, fmt("%d transforms over 6 instances, min slope of f1 %.9f, %d failing%s%s", checked,
                                       least, bad, where.empty() ? "" : " first ", where.c_str())};
}

Outcome representation() {
  struct Case {
    const char* name;
    const char* expr;
    Vector x_bar;
    double radius, h;
  };
  const std::vector<Case> cases{
      {"-x at 0", R"({"dim": 1, "terms": [{"type": "linear", "v": [-1]}]})", vec({0}), 1.0, 1e-3},
      {"-|x|^2 at (0.5,0)", R"({"dim": 2, "terms": [{"type": "quadratic", "diag": [-2, -2]}]})", vec({0.5, 0}), 0.3,
       0.004},
      {"|x|^2/2 at (1,0)", R"({"dim": 2, "terms": [{"type": "quadratic", "diag": [1, 1]}]})", vec({1, 0}), 0.3, 0.004},
      {"l1 at (0.5,0.5)", R"({"dim": 2, "terms": [{"type": "l1"}]})", vec({0.5, 0.5}), 0.3, 0.004},
      {"saddle at (0.5,0.3)", R"({"dim": 2, "terms": [{"type": "quadratic", "diag": [2, -2]}]})", vec({0.5, 0.3}),
       0.3, 0.004},
  };
  const double c = 1.0;
  int steps = 0, bad = 0;
  std::string first;
  for (const auto& k : cases) {
    const Expression e = expression_from_json(nlohmann::json::parse(k.expr));
    const auto grid = plrkit::testing::grid(e.dim(), k.radius, k.h, k.x_bar);
    const ScalarField f = tabulate(e, grid);
    const auto slopes = analytic_slopes(SubdifferentialOracle::of(e), *grid);
    const PointIndex xb = *grid->locate(k.x_bar);
    const double r = slopes[xb].value();
    const int n0 = static_cast<int>(std::ceil(1.0 / r)) + 1;
    const auto rep = representation_sequence(f, slopes, xb, c, n0, n0 + 9);
    for (const auto& s : rep.steps) {
      ++steps;
      if (!(s.in_range && s.quotient_ok && s.distance_ok && s.gap_ok)) {
        ++bad;
        if (first.empty()) first = fmt("%s n=%d (q %.4g d %.4g)", k.name, s.n, s.quotient, s.distance);
      }
    }
    if (rep.steps.size() != 10) ++bad;
  }
  return {bad == 0, fmt("5 fields, %d steps, %d failing%s%s", steps, bad, first.empty() ? "" : ": ", first.c_str())};
}

Outcome determination() {
  int positives = 0, negatives = 0, bad = 0, orbits = 0;
  std::string first;
  for (const auto& inst : DeterminationInstance::builtin()) {
    const auto& rep = determination_at(inst, 1e-2);
    bool ok = rep.pass;
    if (inst.expect_equal) {
      ++positives;
      ok = ok && rep.a_ok && rep.max_deviation <= rep.tolerance;
      for (const auto& run : rep.runs) {
        for (const auto& d : run.core.dilations) {
          ++orbits;
          ok = ok && d.ends_at_min && d.length.ok && d.orbit.length <= d.sharp_bound;
        }
      }
    } else {
      ++negatives;
      ok = ok && !rep.gate.equal && rep.gate.witness.has_value();
    }
    if (!ok) {
      ++bad;
      if (first.empty()) first = inst.id + ": " + rep.failure;
    }
  }
  return {bad == 0 && positives == 6 && negatives == 3,
          fmt("%d positive, %d negative, %d orbits checked, %d failing%s%s", positives, negatives, orbits, bad,
              first.empty() ? "" : "; ", first.c_str())};
}

Outcome refinement() {
  const std::vector<double> hs{4e-2, 2e-2, 1e-2, 5e-3};
  bool ok = true;
  std::string text;
  for (const char* id : {"neg_sq_a0", "saddle_shift_1", "shift_2p5"}) {
    const auto& inst = DeterminationInstance::builtin(id);
    text += std::string(text.empty() ? "" : "; ") + id + ":";
    double prev = std::numeric_limits<double>::infinity();
    for (double h : hs) {
      const auto& rep = determination_at(inst, h);
      text += fmt(" %.3g", rep.certified_deviation);
      ok = ok && rep.pass && rep.certified_deviation < prev;
      prev = rep.certified_deviation;
    }
  }
  return {ok, "certified max |f-g-a| over h = 4e-2..5e-3: " + text};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 constant exactness", constants},        {"AC2 Ekeland oracle", ekeland},
      {"AC3 slope characterization", slope_sweep},  {"AC4 PLR certification", plr},
      {"AC5 series lemma", series},                 {"AC6 sharp-minimum transform", sharp_min},
      {"AC7 representation sequences", representation}, {"AC8 determination end-to-end", determination},
      {"AC9 refinement convergence", refinement},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
