#include "doctest.h"

#include "plrkit/catalog.hpp"
#include "plrkit/errors.hpp"
#include "plrkit/slope.hpp"
#include "plrkit/subdifferential.hpp"
#include "support.hpp"

using namespace plrkit;
using plrkit::testing::Gen;
using plrkit::testing::grid;
using plrkit::testing::vec;

namespace {

ScalarField on_grid(std::shared_ptr<const EuclideanGrid> g, const std::function<double(const Vector&)>& fn) {
  return ScalarField::tabulate(g, [&](PointIndex i) { return ExtReal(fn(g->point(i))); });
}

}  // namespace

TEST_CASE("exact slope on a finite space is zero everywhere") {
  Gen gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = plrkit::testing::random_finite_space(gen, 2 + gen.index(12));
    const auto f = plrkit::testing::random_field(gen, s);
    for (PointIndex x = 0; x < s->size(); ++x) {
      if (!f.finite(x)) {
        CHECK_THROWS_AS(local_slope_finite(f, x), DomainError);
        continue;
      }
      const auto est = local_slope_finite(f, x);
      CHECK(est.value == ExtReal(0.0));
      CHECK_FALSE(est.resolution.has_value());
    }
  }
}

TEST_CASE("discrete slope on the unit path at scale = diameter") {
  auto path = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::path(3));
  const ScalarField f(path, {0.0, 1.0, 2.0});
  const auto est = discrete_slope(f, 2, path->diameter());
  CHECK(est.value == ExtReal(1.0));
  // y = 0 and y = 1 both give quotient 1; the nearer one is the witness
  CHECK(est.witness == PointIndex{1});
  CHECK(discrete_slope(f, 0, 2.0).value == ExtReal(0.0));
  CHECK_FALSE(discrete_slope(f, 0, 2.0).witness.has_value());
  CHECK_THROWS_AS(discrete_slope(f, 0, 0.0), InputError);
}

TEST_CASE("discrete slope of x^2 at 1 with eps 0.5, h 0.25") {
  const auto g = grid(1, 2.0, 0.25);
  const auto f = on_grid(g, [](const Vector& x) { return x[0] * x[0]; });
  const PointIndex one = *g->locate(vec({1.0}));
  const auto est = discrete_slope(f, one, 0.5);
  // quotients (1 - y^2)^+ / |1 - y| over y in {0.5, 0.75, 1.25, 1.5} are 1.5, 1.75, 0, 0
  CHECK(est.value.value() == doctest::Approx(1.75).epsilon(1e-15));
  REQUIRE(est.witness.has_value());
  CHECK(g->point(*est.witness)[0] == 0.75);
}

TEST_CASE("discrete slope at a minimum and of a constant is zero") {
  const auto g = grid(1, 1.0, 0.1);
  const auto absf = on_grid(g, [](const Vector& x) { return std::fabs(x[0]); });
  CHECK(discrete_slope(absf, *g->locate(vec({0.0})), 0.3).value == ExtReal(0.0));
  const auto cst = on_grid(g, [](const Vector&) { return 3.0; });
  for (PointIndex i = 0; i < g->size(); ++i) CHECK(discrete_slope(cst, i, 0.25).value == ExtReal(0.0));
}

TEST_CASE("discrete slope skips +inf neighbours and caps huge quotients") {
  auto path = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::path(3, 1e-9));
  const ScalarField f(path, {ExtReal::infinity(), 5e4, 0.0});
  const auto est = discrete_slope(f, 1, 1.0);
  CHECK(est.value.is_infinite());
  CHECK(est.capped);
  CHECK(est.witness == PointIndex{2});
  CHECK(discrete_slope(f, 1, 1.0, 1e15).value.value() == doctest::Approx(5e13));
  const auto all = discrete_slopes(f, 1.0);
  CHECK(all[0].value.is_infinite());
  CHECK_FALSE(all[0].capped);
}

TEST_CASE("discrete slope of |x|^2/2 tracks |x| on a 2-d grid") {
  const double h = 0.02, eps = 4 * h;
  const auto g = grid(2, 1.0, h);
  const auto f = on_grid(g, [](const Vector& x) { return 0.5 * x.squaredNorm(); });
  double worst = 0;
  for (PointIndex i = 0; i < g->size(); i += 7) {
    if (g->point(i).norm() > 0.9) continue;
    worst = std::max(worst, std::fabs(discrete_slope(f, i, eps).value.value() - g->point(i).norm()));
  }
  // curvature 1: the error is at most eps / 2 plus the lattice direction error
  CHECK(worst <= eps + h);
}

TEST_CASE("property: brute-force oracle agrees with discrete_slope on random spaces") {
  Gen gen(21);
  for (int trial = 0; trial < 80; ++trial) {
    auto s = plrkit::testing::random_finite_space(gen, 2 + gen.index(40));
    const auto f = plrkit::testing::random_field(gen, s);
    const double eps = gen.uniform(0.05, 3.0);
    for (PointIndex x = 0; x < s->size(); ++x) {
      if (!f.finite(x)) continue;
      const auto est = discrete_slope(f, x, eps);
      CHECK(est.value.value() == plrkit::testing::brute_slope(f, x, eps));
      if (est.witness) {
        const double d = s->distance(x, *est.witness);
        CHECK((f.value(x) - f.value(*est.witness)) / d == est.value.value());
      }
    }
  }
}

TEST_CASE("property: positive homogeneity of the discrete slope") {
  Gen gen(22);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = plrkit::testing::random_finite_space(gen, 2 + gen.index(30));
    const auto f = plrkit::testing::random_field(gen, s);
    const double r = gen.coin(0.1) ? 0.0 : std::ldexp(1.0, gen.integer(-4, 4));
    const double eps = gen.uniform(0.1, 3.0);
    const auto fr = f.scaled(r);
    for (PointIndex x = 0; x < s->size(); ++x) {
      if (!f.finite(x)) continue;
      // powers of two scale exactly
      CHECK(discrete_slope(fr, x, eps).value.value() == r * discrete_slope(f, x, eps).value.value());
    }
  }
}

TEST_CASE("property: slopes are unchanged by restriction to a sublevel set") {
  Gen gen(23);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = plrkit::testing::random_finite_space(gen, 2 + gen.index(30));
    const auto f = plrkit::testing::random_field(gen, s);
    PointIndex x0 = gen.index(s->size());
    while (!f.finite(x0)) x0 = gen.index(s->size());
    const auto y = sublevel_restrict(f, x0);
    const double eps = gen.uniform(0.1, 3.0);
    for (std::size_t k = 0; k < y.parent_index.size(); ++k) {
      CHECK(discrete_slope(y.field, k, eps).value == discrete_slope(f, y.parent_index[k], eps).value);
    }
  }
}

TEST_CASE("property: smooth catalog entries satisfy |slope - |grad f|| <= L (eps + h)") {
  const auto& cat = Catalog::builtin();
  for (const char* id : {"half_sq_norm", "neg_sq_norm", "saddle", "sq_1d", "neg_linear_1d"}) {
    const auto& e = cat.at(id);
    const double h = 0.025, eps = 4 * h;
    const auto g = grid(e.expr.dim(), 1.0, h);
    const auto f = tabulate(e.expr, g);
    const auto oracle = SubdifferentialOracle::of(e);
    const double L = e.expr.curvature_bound(Vector::Zero(e.expr.dim()), 1.0);
    for (PointIndex i = 0; i < g->size(); ++i) {
      if (g->point(i).norm() > 1.0 - eps) continue;
      const double analytic = slope_from_subdifferential(oracle, g->point(i)).value();
      CHECK(std::fabs(discrete_slope(f, i, eps).value.value() - analytic) <= (1 + L) * (eps + h));
    }
  }
}

TEST_CASE("lip estimates") {
  SUBCASE("phi of the distance, phi(t) = t^2, stays below phi'(1) = 2") {
    const auto g = grid(1, 1.0, 0.05);
    const auto field = on_grid(g, [](const Vector& x) { return x[0] * x[0]; });
    const auto est = lip_estimate(field, *g->locate(vec({0})), 1.0);
    CHECK(est.value <= 2.0);
    CHECK(est.value >= 1.9);
    CHECK(est.radius == 1.0);
  }
  SUBCASE("linear field with gradient norm 3") {
    const auto g = grid(2, 0.5, 0.05);
    const auto field = on_grid(g, [](const Vector& x) { return 3 * (0.6 * x[0] + 0.8 * x[1]); });
    const auto est = lip_estimate(field, *g->locate(vec({0, 0})), 0.5);
    CHECK(est.value <= 3.0 + 1e-12);
    CHECK(est.value >= 3.0 * std::cos(std::atan(0.5)));
  }
  SUBCASE("constant field and degenerate regions") {
    auto path = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::path(4));
    const ScalarField c(path, {2.0, 2.0, 2.0, 2.0});
    CHECK(lip_estimate(c, 0, 3.0).value == 0.0);
    const auto single = lip_estimate(c, 0, 0.5);
    CHECK(single.degenerate);
    CHECK(single.value == 0.0);
    const ScalarField partial(path, {0.0, ExtReal::infinity(), 0.0, 0.0});
    CHECK_THROWS_AS(lip_estimate(partial, 0, 3.0), DomainError);
  }
}

TEST_CASE("property: lip of phi(d(., x0)) never exceeds phi'(radius)") {
  Gen gen(24);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = gen.integer(1, 2);
    const double r = gen.uniform(0.3, 1.0);
    const auto g = grid(dim, r, r / 12);
    const Vector x0 = Vector::Zero(dim);
    const int power = gen.integer(1, 3);
    const auto field = on_grid(g, [&](const Vector& x) { return std::pow((x - x0).norm(), power); });
    const double bound = power * std::pow(r, power - 1);
    CHECK(lip_estimate(field, *g->locate(x0), r).value <= bound * (1 + 1e-12));
  }
}

TEST_CASE("slope at a minimum of f + g is bounded by lip g") {
  const auto g = grid(1, 1.0, 0.01);
  const PointIndex zero = *g->locate(vec({0}));
  SUBCASE("|x| - x/2") {
    const auto f = on_grid(g, [](const Vector& x) { return std::fabs(x[0]); });
    const auto h = on_grid(g, [](const Vector& x) { return -0.5 * x[0]; });
    const auto r = check_slope_lip_at_min(f, h, zero, 0.1);
    CHECK(r.holds);
    CHECK(r.slope == 0.0);
    CHECK(r.lip == doctest::Approx(0.5));
  }
  SUBCASE("x^2 with g = 0") {
    const auto f = on_grid(g, [](const Vector& x) { return x[0] * x[0]; });
    const auto h = on_grid(g, [](const Vector&) { return 0.0; });
    const auto r = check_slope_lip_at_min(f, h, zero, 0.1);
    CHECK(r.holds);
    CHECK(r.slope == 0.0);
    CHECK(r.lip == 0.0);
  }
  SUBCASE("2|x| + x^2 with g = -2x") {
    const auto f = on_grid(g, [](const Vector& x) { return 2 * std::fabs(x[0]) + x[0] * x[0]; });
    const auto h = on_grid(g, [](const Vector& x) { return -2 * x[0]; });
    const auto r = check_slope_lip_at_min(f, h, zero, 0.1);
    CHECK(r.holds);
    CHECK(r.lip == doctest::Approx(2.0));
  }
  SUBCASE("not a minimum") {
    const auto f = on_grid(g, [](const Vector& x) { return x[0]; });
    const auto h = on_grid(g, [](const Vector&) { return 0.0; });
    CHECK_THROWS_AS(check_slope_lip_at_min(f, h, zero, 0.1), PreconditionError);
  }
}
