#include "doctest.h"

#include "plrkit/convex_set.hpp"
#include "support.hpp"

using namespace plrkit;
using plrkit::testing::Gen;
using plrkit::testing::vec;

TEST_CASE("min-norm element: singleton, segment, ball, empty") {
  CHECK(*min_norm_element(ConvexSet::singleton(vec({1.5, -2}))) == vec({1.5, -2}));

  const Vector seg = *min_norm_element(ConvexSet::polytope({vec({-1, 1}), vec({1, 1})}));
  CHECK((seg - vec({0, 1})).norm() <= 1e-12);

  const Vector b = *min_norm_element(ConvexSet::ball(vec({3, 4}), 1.0));
  CHECK((b - vec({2.4, 3.2})).norm() <= 1e-12);

  CHECK(min_norm_element(ConvexSet::ball(vec({0.3, 0.4}), 1.0))->norm() == 0.0);
  CHECK_FALSE(min_norm_element(ConvexSet::empty(2)).has_value());
}

TEST_CASE("min-norm element of the box [-1,1]^2 and of an interval") {
  const auto box = ConvexSet::polytope({vec({-1, -1}), vec({-1, 1}), vec({1, -1}), vec({1, 1})});
  CHECK(min_norm_element(box)->norm() <= 1e-12);
  CHECK(std::fabs((*min_norm_element(ConvexSet::polytope({vec({0}), vec({1})})))[0]) <= 1e-15);
  CHECK((*min_norm_element(ConvexSet::polytope({vec({0.5}), vec({2})})))[0] == doctest::Approx(0.5));
}

TEST_CASE("Minkowski sums, scaling and translation") {
  const auto a = ConvexSet::polytope({vec({-1}), vec({1})});
  const auto sum = a + ConvexSet::singleton(vec({1}));
  CHECK(sum.support(vec({1})) == doctest::Approx(2.0));
  CHECK(sum.support(vec({-1})) == doctest::Approx(0.0));
  const auto ball_sum = ConvexSet::ball(vec({1, 0}), 0.5) + ConvexSet::ball(vec({0, 1}), 0.25);
  CHECK(ball_sum.radius() == 0.75);
  CHECK(ball_sum.contains(vec({1, 1}) + vec({0.75, 0})));
  CHECK_FALSE(ball_sum.contains(vec({1, 1}) + vec({0.76, 0})));
  CHECK(a.scaled(-2).support(vec({1})) == doctest::Approx(2.0));
  CHECK(a.translated(vec({3})).support(vec({-1})) == doctest::Approx(-2.0));
  CHECK((ConvexSet::empty(1) + a).is_empty());
  CHECK(ConvexSet::empty(2).support(vec({1, 0})) == -std::numeric_limits<double>::infinity());
}

namespace {

ConvexSet random_set(Gen& gen, int dim) {
  const int kind = gen.integer(0, 3);
  const Vector shift = gen.vector(dim, -2, 2);
  if (kind == 0) return ConvexSet::singleton(shift);
  if (kind == 1) return ConvexSet::ball(shift, gen.uniform(0, 1.5));
  std::vector<Vector> pts;
  const int m = gen.integer(1, kind == 2 ? 8 : 14);
  for (int i = 0; i < m; ++i) pts.push_back(shift + gen.vector(dim, -1, 1));
  auto s = ConvexSet::polytope(pts);
  if (gen.coin(0.3)) s = s + ConvexSet::ball(Vector::Zero(dim), gen.uniform(0, 0.5));
  return s;
}

}  // namespace

TEST_CASE("property: min-norm point satisfies the projection inequality") {
  Gen gen(41);
  for (int trial = 0; trial < 400; ++trial) {
    const int dim = gen.integer(1, 4);
    const auto s = random_set(gen, dim);
    const Vector p = *min_norm_element(s);
    CHECK(s.contains(p, 1e-9));
    // <p*, q - p*> >= 0 for generators and sampled boundary points
    for (const Vector& v : s.generators()) {
      for (int k = 0; k < 4; ++k) {
        Vector u = gen.vector(dim, -1, 1);
        if (u.norm() == 0.0) continue;
        u.normalize();
        const Vector q = v + s.radius() * u;
        CHECK(p.dot(q - p) >= -1e-9);
      }
    }
    // nothing in the set is shorter: support in direction -p bounds <q, p/|p|>
    if (p.norm() > 1e-9) CHECK(-s.support(-p / p.norm()) == doctest::Approx(p.norm()).epsilon(1e-8));
  }
}

TEST_CASE("property: exact enumeration and Wolfe agree") {
  Gen gen(42);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = gen.integer(1, 4);
    std::vector<Vector> pts;
    const int m = gen.integer(1, 8);
    const Vector shift = gen.vector(dim, -1.5, 1.5);
    for (int i = 0; i < m; ++i) pts.push_back(shift + gen.vector(dim, -1, 1));
    const Vector exact = min_norm_exact(pts);
    const Vector wolfe = min_norm_wolfe(pts);
    CHECK(std::fabs(exact.norm() - wolfe.norm()) <= 1e-8);
    CHECK((exact - wolfe).norm() <= 1e-6);
    CHECK((min_norm_polytope(pts) - exact).norm() <= 1e-12);
  }
}

TEST_CASE("property: membership and the support function agree on random directions") {
  Gen gen(43);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = gen.integer(1, 4);
    const auto s = random_set(gen, dim);
    for (int k = 0; k < 10; ++k) {
      Vector u = gen.vector(dim, -1, 1);
      if (u.norm() < 1e-6) continue;
      u.normalize();
      const Vector top = s.support_point(u);
      CHECK(s.contains(top, 1e-9));
      CHECK(top.dot(u) == doctest::Approx(s.support(u)).epsilon(1e-12));
      // a point just beyond the supporting hyperplane is outside
      CHECK_FALSE(s.contains(top + 1e-3 * u, 1e-9));
      // a random point is inside iff no sampled direction separates it
      const Vector q = top - gen.uniform(0, 1) * u;
      if (s.contains(q, 1e-9)) CHECK(q.dot(u) <= s.support(u) + 1e-9);
    }
  }
}
