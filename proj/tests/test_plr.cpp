#include "doctest.h"

#include "plrkit/catalog.hpp"
#include "plrkit/errors.hpp"
#include "plrkit/plr.hpp"
#include "plrkit/subdifferential.hpp"
#include "support.hpp"

using namespace plrkit;
using plrkit::testing::Gen;
using plrkit::testing::vec;
using nlohmann::json;

namespace {

Expression expr(const char* text) { return expression_from_json(json::parse(text)); }

const Expression& entry(const char* id) { return Catalog::builtin().at(id).expr; }

PlrSampling coarse() {
  PlrSampling s;
  s.spacing = 0;  // delta / 20
  return s;
}

std::vector<ExtReal> slopes_of(const Expression& e, const EuclideanGrid& g) {
  return analytic_slopes(SubdifferentialOracle::of(e), g);
}

}  // namespace

TEST_CASE("constants") {
  CHECK(delta_prime(1, 1) == 1.0 / 9.0);
  CHECK(c_prime(1) == 6.0);
  CHECK(delta_hat(1, 1) == 1.0 / 18.0);
  CHECK(delta_prime(0.1, 0.5) == 0.5);
  CHECK(delta_hat(0.1, 0.5) == 0.25);
  CHECK(c_prime(2.5) == 15.0);
  Gen gen(71);
  for (int k = 0; k < 200; ++k) {
    const double c = std::exp(gen.uniform(-3, 3)), d = std::exp(gen.uniform(-3, 3));
    CHECK(delta_prime(c, d) == std::min(d, 1 / (9 * c)));
    CHECK(delta_hat(c, d) == std::min(d / 2, 1 / (18 * c)));
    CHECK(delta_hat(c, d) == doctest::Approx(delta_prime(c, d) / 2).epsilon(1e-15));
  }
}

TEST_CASE("certify_plr on catalog entries") {
  SUBCASE("convex entries pass") {
    for (const char* id : {"l1_norm", "euclidean_norm", "max_norm"}) {
      CHECK_MESSAGE(certify_plr(entry(id), vec({0, 0}), 0.1, 1.0, coarse()).pass, id);
    }
  }
  SUBCASE("-|x|^2 passes at c = 1") {
    const auto cert = certify_plr(entry("neg_sq_norm"), vec({0, 0}), 1.0, 1.0, coarse());
    CHECK(cert.pass);
    CHECK(cert.worst_margin >= -1e-12);
    CHECK(cert.pairs > 0);
  }
  SUBCASE("-|x|^2 fails at c = 0.1, delta = 2 near the boundary") {
    const auto cert = certify_plr(entry("neg_sq_norm"), vec({0, 0}), 0.1, 2.0, coarse());
    CHECK_FALSE(cert.pass);
    REQUIRE(cert.worst.has_value());
    const auto& w = *cert.worst;
    // the witness really violates the inequality
    const Expression& f = entry("neg_sq_norm");
    const double rhs = f(w.x) + w.p.dot(w.y - w.x) - 0.1 * (1 + w.p.norm()) * (w.y - w.x).squaredNorm();
    CHECK(f(w.y) < rhs);
    CHECK(std::max(w.x.norm(), w.y.norm()) > 1.5);
    CHECK_FALSE(cert.violations.empty());
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(certify_plr(entry("half_sq_norm"), vec({0, 0}), 0.0, 1.0), InputError);
    CHECK_THROWS_AS(certify_plr(entry("half_sq_norm"), vec({0, 0}), 1.0, -1.0), InputError);
    CHECK_THROWS_AS(certify_plr(entry("half_sq_norm"), vec({0}), 1.0, 1.0), InputError);
    const SubdifferentialOracle none(2, [](const Vector&) { return ConvexSet::empty(2); }, "none", true, true);
    CHECK_THROWS_AS(certify_plr(entry("half_sq_norm"), none, vec({0, 0}), 1.0, 1.0), CoverageError);
  }
}

TEST_CASE("property: C^{1,1} entries pass at c = L/2 for every delta") {
  Gen gen(72);
  for (const char* id : {"half_sq_norm", "neg_sq_norm", "saddle", "sq_1d"}) {
    const Expression& f = entry(id);
    for (int k = 0; k < 3; ++k) {
      const double delta = gen.uniform(0.2, 2.0);
      const Vector center = gen.vector(f.dim(), -0.5, 0.5);
      const double L = f.curvature_bound(center, delta);
      CHECK_MESSAGE(certify_plr(f, center, L / 2, delta, coarse()).pass, id);
    }
  }
}

TEST_CASE("subgradient selection covers generators, the min-norm point and boundary points") {
  const auto box = ConvexSet::polytope({vec({-1, -1}), vec({-1, 1}), vec({1, -1}), vec({1, 1})});
  const auto sel = subgradient_selection(box, 8, 3);
  CHECK(sel.size() >= 5);
  for (const auto& p : sel) CHECK(box.contains(p));
  const auto ball = ConvexSet::ball(vec({0.5, 0}), 1.0);
  const auto bsel = subgradient_selection(ball, 8, 3);
  CHECK(bsel.size() >= 8);
  CHECK(subgradient_selection(ball, 8, 3) == bsel);
}

TEST_CASE("regular slope certificates") {
  const auto g = plrkit::testing::grid(2, 1.0, 0.05);
  SUBCASE("constant") {
    const auto f = ScalarField::tabulate(g, [](PointIndex) { return ExtReal(1.0); });
    const std::vector<ExtReal> zero(g->size(), 0.0);
    CHECK(certify_regular_slope(f, zero, 1e-3).pass);
  }
  SUBCASE("-|x|^2 with slope 2|x| at c = 1") {
    const auto f = tabulate(entry("neg_sq_norm"), g);
    CHECK(certify_regular_slope(f, slopes_of(entry("neg_sq_norm"), *g), 1.0).pass);
  }
  SUBCASE("-|x|^3 on the radius-2 ball fails at c = 0.1") {
    const auto g2 = plrkit::testing::grid(2, 2.0, 0.1);
    const auto f = tabulate(entry("neg_cubic_norm"), g2);
    const auto cert = certify_regular_slope(f, slopes_of(entry("neg_cubic_norm"), *g2), 0.1);
    CHECK_FALSE(cert.pass);
    REQUIRE(cert.worst.has_value());
    CHECK(std::max(g2->point(cert.worst->x).norm(), g2->point(cert.worst->y).norm()) > 1.5);
  }
  SUBCASE("+inf slopes are skipped") {
    const auto f = tabulate(entry("neg_sq_norm"), g);
    std::vector<ExtReal> s = slopes_of(entry("neg_sq_norm"), *g);
    s[0] = ExtReal::infinity();
    const auto cert = certify_regular_slope(f, s, 1.0);
    CHECK(cert.pass);
    CHECK(cert.skipped == 1);
    CHECK_THROWS_AS(certify_regular_slope(f, std::vector<ExtReal>(3, 0.0), 1.0), InputError);
  }
}

TEST_CASE("scale_plr") {
  const auto base = certify_plr(entry("neg_sq_norm"), vec({0, 0}), 1.0, 1.0, coarse());
  CHECK(scale_plr(base, 0.999).pass);
  const auto half = scale_plr(base, 0.5);
  CHECK(half.pass);
  CHECK(half.c == 1.0);
  CHECK(half.delta == 1.0);
  const auto broken = certify_plr(entry("neg_sq_norm"), vec({0, 0}), 0.1, 2.0, coarse());
  CHECK_FALSE(scale_plr(broken, 0.9).pass);
  CHECK_THROWS_AS(scale_plr(base, 1.0), InputError);
  CHECK_THROWS_AS(scale_plr(base, 0.0), InputError);
}

TEST_CASE("property: scaling keeps passing certificates passing") {
  Gen gen(73);
  for (const char* id : {"neg_sq_norm", "saddle", "composite_shell", "norm_plus_quadratic"}) {
    const auto base = certify_plr(entry(id), vec({0, 0}), 1.0, 0.5, coarse());
    REQUIRE(base.pass);
    for (int k = 0; k < 3; ++k) CHECK(scale_plr(base, gen.uniform(0.01, 0.99)).pass);
  }
}

TEST_CASE("add_convex_plr") {
  const auto base = certify_plr(entry("neg_sq_norm"), vec({0, 0}), 1.0, 1.0, coarse());
  SUBCASE("h = 0 keeps the coefficient") {
    const auto r = add_convex_plr(base, expr(R"({"dim": 2, "terms": []})"));
    CHECK(r.lipschitz == 0.0);
    CHECK(r.coefficient == 1.0);
    CHECK(r.cert.pass);
  }
  SUBCASE("linear h with L = 1 gives coefficient 2") {
    const auto r = add_convex_plr(base, expr(R"({"dim": 2, "terms": [{"type": "linear", "v": [1, 0]}]})"));
    CHECK(r.lipschitz == doctest::Approx(1.0));
    CHECK(r.coefficient == doctest::Approx(2.0));
    CHECK(r.cert.pass);
  }
  SUBCASE("the sharp-minimum perturbation stays within 6c") {
    const auto r = add_convex_plr(
        base, expr(R"({"dim": 2, "terms": [{"type": "norm", "coef": 4}, {"type": "linear", "v": [-0.6, 0.3]}]})"));
    CHECK(r.lipschitz <= 5.0);
    CHECK(r.coefficient <= c_prime(1.0));
    CHECK(r.cert.pass);
  }
  SUBCASE("nonconvex h is refused") {
    CHECK_THROWS_AS(add_convex_plr(base, entry("neg_sq_norm")), InputError);
  }
}

TEST_CASE("sharp_min_transform") {
  SUBCASE("constants for c = 1, delta = 1") {
    const auto r = sharp_min_transform(entry("neg_sq_norm"), SubdifferentialOracle::of(entry("neg_sq_norm")),
                                       vec({0, 0}), 1.0, 1.0, vec({0, 0}));
    CHECK(r.delta_prime == 1.0 / 9.0);
    CHECK(r.c_prime == 6.0);
    CHECK(r.ok);
    // min-norm slope of 4|x| - |x|^2 is 4 - 2|x|, smallest at the outermost sample
    const Vector x = r.min_slope_point;
    CHECK(r.min_slope == doctest::Approx(4 - 2 * x.norm()).epsilon(1e-12));
    CHECK(r.min_slope > 4 - 2.0 / 9.0 - 1e-12);
  }
  SUBCASE("convex f with 0 in df(center)") {
    for (const char* id : {"l1_norm", "euclidean_norm", "max_norm", "composite_shell"}) {
      const auto& f = entry(id);
      const auto r = sharp_min_transform(f, SubdifferentialOracle::of(f), vec({0, 0}), 1.0, 1.0, vec({0, 0}));
      CHECK_MESSAGE(r.ok, id);
      CHECK(r.min_slope >= 4 - 1e-9);
    }
  }
  SUBCASE("nonzero p at a smooth point") {
    const auto& f = entry("half_sq_norm");
    const Vector center = vec({0.3, -0.4});
    const auto r = sharp_min_transform(f, SubdifferentialOracle::of(f), center, 1.0, 0.5, center);
    CHECK(r.ok);
    CHECK(r.f1_at_center <= r.min_sampled_f1);
  }
  SUBCASE("preconditions") {
    const auto& f = entry("neg_sq_norm");
    const auto o = SubdifferentialOracle::of(f);
    CHECK_THROWS_AS(sharp_min_transform(f, o, vec({0, 0}), 1.0, 1.0, vec({1, 0})), PreconditionError);
    CHECK_THROWS_AS(sharp_min_transform(f, o, vec({0, 0}), 1.0, 1.0, vec({0.5, 0})), PreconditionError);
    CHECK_THROWS_AS(sharp_min_transform(f, o, vec({0, 0}), 0.1, 2.0, vec({0, 0})), PreconditionError);
  }
}

TEST_CASE("series bound") {
  SUBCASE("a = 0 with decreasing b") {
    const std::vector<double> a(5, 0.0), b{3.0, 2.5, 2.0, 1.0, 0.5, 0.25};
    const auto r = verify_series_bound(a, b, 1.0);
    CHECK(r.hypothesis_ok);
    CHECK(r.bound == 3.0);
    CHECK(r.bound_ok);
  }
  SUBCASE("a_n = 2^-n, b_{n+1} = b_n + 1.9 (2 + b_n) a_n") {
    std::vector<double> a, b{1.0};
    // stop before the increments drop below one ulp of b, where rounding can exceed the 2x margin
    for (int n = 0; n < 30; ++n) {
      a.push_back(std::ldexp(1.0, -n));
      b.push_back(b.back() + 1.9 * (2 + b.back()) * a.back());
    }
    const auto r = verify_series_bound(a, b, 1.0);
    CHECK(r.hypothesis_ok);
    CHECK(r.s == doctest::Approx(2.0));
    CHECK(r.bound == doctest::Approx(13 * std::exp(12.0)));
    CHECK(r.bound_ok);
    CHECK(r.max_b < r.bound);
  }
  SUBCASE("planted jump at b_5") {
    std::vector<double> a(9, 0.1), b{1.0};
    for (int n = 0; n < 9; ++n) b.push_back(b.back() + 1.5 * (2 + b.back()) * 0.1);
    b[5] = b[4] + 2 * (2 + b[4]) * 0.1 + 1.0;
    const auto r = verify_series_bound(a, b, 1.0);
    CHECK_FALSE(r.hypothesis_ok);
    CHECK(r.hypothesis_violation == std::size_t{4});
    CHECK_FALSE(r.bound_ok);
  }
  SUBCASE("input errors") {
    const std::vector<double> a{0.1}, bad_a{-0.1}, b{1.0, 1.1};
    CHECK_THROWS_AS(verify_series_bound(bad_a, b, 1.0), InputError);
    CHECK_THROWS_AS(verify_series_bound(a, b, 0.0), InputError);
    const std::vector<double> zero_b{0.0, 1.0};
    CHECK_THROWS_AS(verify_series_bound(a, zero_b, 1.0), InputError);
  }
}

TEST_CASE("property: sequences built to satisfy the hypothesis respect the bound") {
  Gen gen(74);
  for (int trial = 0; trial < 300; ++trial) {
    const double c = std::exp(gen.uniform(-2, 1));
    const int len = gen.integer(1, 40);
    std::vector<double> a, b{gen.uniform(0.01, 5)};
    for (int n = 0; n < len; ++n) {
      a.push_back(gen.coin(0.2) ? 0.0 : gen.uniform(0, 0.3) * std::pow(0.8, n));
      const double room = 2 * c * (2 + b.back()) * a.back();
      const double next = room > 0 ? b.back() + gen.uniform(-1, 0.999) * room : b.back() * gen.uniform(0.5, 0.999);
      b.push_back(std::max(next, 1e-3));
    }
    // keep the hypothesis strict after the clamp above
    bool ok = true;
    for (std::size_t n = 0; n + 1 < b.size(); ++n) ok = ok && b[n + 1] - b[n] < 2 * c * (2 + b[n]) * a[n];
    if (!ok) continue;
    const auto r = verify_series_bound(a, b, c);
    CHECK(r.hypothesis_ok);
    CHECK(r.bound_ok);
  }
}

TEST_CASE("representation sequence for f = -x at 0") {
  const auto g = plrkit::testing::grid(1, 1.0, 1e-3);
  const auto& f_expr = entry("neg_linear_1d");
  const auto f = tabulate(f_expr, g);
  const auto slopes = slopes_of(f_expr, *g);
  const PointIndex zero = *g->locate(vec({0}));
  const auto r = representation_sequence(f, slopes, zero, 1.0, 1, 4);
  CHECK(r.r == 1.0);
  REQUIRE(r.steps.size() == 4);
  CHECK_FALSE(r.steps[0].in_range);  // n = 1 is not > 1/r
  const auto& s2 = r.steps[1];
  CHECK(s2.n == 2);
  CHECK(s2.distance < 0.5);
  CHECK(s2.quotient > 0.5);
  // independent check of the three reported inequalities
  const double x2 = g->point(s2.x_n)[0];
  CHECK(-(-x2) / std::fabs(x2) > 1 - 1.0 / 2);
  CHECK(std::fabs(x2) < 1.0 / 2);
  CHECK(1.0 - 1.0 < 2 * 1.0 * (1.0 + 2) * std::fabs(x2));
  CHECK(r.ok);
}

TEST_CASE("representation sequence preconditions") {
  const auto g = plrkit::testing::grid(1, 1.0, 0.01);
  const auto& e = entry("sq_1d");
  const auto f = tabulate(e, g);
  const auto slopes = slopes_of(e, *g);
  CHECK_THROWS_AS(representation_sequence(f, slopes, *g->locate(vec({0})), 1.0, 2, 3), PreconditionError);
  auto inf = slopes;
  inf[*g->locate(vec({0.5}))] = ExtReal::infinity();
  CHECK_THROWS_AS(representation_sequence(f, inf, *g->locate(vec({0.5})), 1.0, 2, 3), PreconditionError);
}

TEST_CASE("property: continuity along bounded-slope sequences for certified fields") {
  // f(y) - f(x) is squeezed by R d + c (R + 1) d^2 in both directions when both slopes are <= R.
  const auto g = plrkit::testing::grid(2, 1.0, 0.05);
  Gen gen(75);
  for (const char* id : {"neg_sq_norm", "saddle", "l1_norm", "composite_shell"}) {
    const auto& e = entry(id);
    const auto f = tabulate(e, g);
    const auto s = slopes_of(e, *g);
    const double c = 1.0;
    REQUIRE(certify_regular_slope(f, s, c).pass);
    for (int k = 0; k < 200; ++k) {
      const PointIndex x = gen.index(g->size()), y = gen.index(g->size());
      const double d = g->distance(x, y);
      const double R = std::max(s[x].value(), s[y].value());
      CHECK(std::fabs(f.value(y) - f.value(x)) <= R * d + c * (R + 1) * d * d + 1e-9);
    }
  }
}

TEST_CASE("property: slope is lower semicontinuous along planted chains") {
  Gen gen(76);
  for (const auto& e : Catalog::builtin().entries()) {
    if (!e.expr.f_regular()) continue;
    const auto o = SubdifferentialOracle::of(e);
    for (int trial = 0; trial < 20; ++trial) {
      const int dim = e.expr.dim();
      Vector x = gen.vector(dim, -1, 1);
      if (trial < 3) x.setZero();
      Vector u = gen.vector(dim, -1, 1);
      if (u.norm() == 0) continue;
      u.normalize();
      double tail = std::numeric_limits<double>::infinity();
      for (int k = 20; k < 30; ++k) tail = std::min(tail, slope_from_subdifferential(o, x + std::ldexp(1.0, -k) * u).value());
      const double L = e.expr.curvature_bound(x, 1.0);
      CHECK_MESSAGE(slope_from_subdifferential(o, x).value() <= tail + L * std::ldexp(1.0, -20) + 1e-9, e.id);
    }
  }
}
