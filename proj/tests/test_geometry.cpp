#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "vvi/geometry.hpp"
#include "vvi/rng.hpp"

using namespace vvi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec random_vec(Rng& rng, std::size_t n, double r) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(-r, r);
  return v;
}

std::vector<ConvexSet> sample_sets() {
  std::vector<ConvexSet> sets;
  sets.push_back(ConvexSet::whole_space(3));
  sets.push_back(ConvexSet::box({-1, 0, -kInf}, {1, kInf, 2}));
  sets.push_back(ConvexSet::ball({0.5, -0.5, 1}, 1.5));
  sets.push_back(ConvexSet::polyhedron(Matrix::from_rows({{1, 1, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}), {1, 0, 0, 0}));
  sets.push_back(ConvexSet::polyhedron(Matrix::from_rows({{1, -2, 0}, {0, 1, 1}, {-1, 0, 1}}), {1, 2, 0.5}));
  sets.push_back(intersect_ball(ConvexSet::polyhedron(Matrix::from_rows({{1, 1, 0}}), {-0.5}), 2.0));
  sets.push_back(intersect_ball(ConvexSet::box({0, -kInf, -kInf}, {kInf, kInf, 1}), 1.0));
  return sets;
}

}  // namespace

TEST_CASE("projection examples") {
  const double z[] = {2.0, 0.0};
  CHECK(project(ConvexSet::whole_space(2), z) == Vec{2.0, 0.0});
  const Vec p = project(ConvexSet::ball({0, 0}, 1), z);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));

  const auto simplex = ConvexSet::polyhedron(Matrix::from_rows({{1, 1}, {-1, 0}, {0, -1}}), {1, 0, 0});
  const double ones[] = {1.0, 1.0};
  const Vec s = project(simplex, ones);
  CHECK(std::abs(s[0] - 0.5) <= 1e-10);
  CHECK(std::abs(s[1] - 0.5) <= 1e-10);
  const auto ref = oracle::kkt_project({{1, 1}, {-1, 0}, {0, -1}}, {1, 0, 0}, {1, 1});
  REQUIRE(ref);
  CHECK(distance(s, *ref) <= 1e-10);
}

TEST_CASE("contains") {
  const double mid[] = {0.5, 0.5};
  CHECK(contains(ConvexSet::box({0, 0}, {1, 1}), mid, 0.0));
  const double out[] = {1 + 1e-6, 0};
  CHECK_FALSE(contains(ConvexSet::ball({0, 0}, 1), out, 1e-9));
  const double tiny[] = {1e-12, 0};
  CHECK(contains(ConvexSet::polyhedron(Matrix::from_rows({{1, 0}}), {0}), tiny, 1e-9));
}

TEST_CASE("intersect_ball") {
  auto b = intersect_ball(ConvexSet::whole_space(2), 3.0);
  REQUIRE(std::holds_alternative<ConvexSet::Ball>(b.variant()));
  CHECK(std::get<ConvexSet::Ball>(b.variant()).radius == 3.0);

  auto nested = intersect_ball(ConvexSet::ball({0, 0}, 1), 2.0);
  REQUIRE(std::holds_alternative<ConvexSet::Ball>(nested.variant()));
  CHECK(std::get<ConvexSet::Ball>(nested.variant()).radius == 1.0);

  auto half = intersect_ball(ConvexSet::box({0, -kInf}, {kInf, kInf}), 1.0);
  const double z[] = {-1.0, 0.0};
  const Vec p = half.project(z);
  CHECK(norm(p) <= 1e-10);
  CHECK_FALSE(half.polyhedral());
  CHECK(half.bounded());

  CHECK_THROWS_AS(intersect_ball(ConvexSet::whole_space(2), 0.0), std::invalid_argument);
}

TEST_CASE("set validation and flags") {
  CHECK_THROWS_AS(ConvexSet::box({1}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::ball({0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::polyhedron(Matrix::from_rows({{1}, {-1}}), {-1, -1}), std::invalid_argument);
  CHECK(ConvexSet::whole_space(2).polyhedral());
  CHECK(ConvexSet::box({0}, {1}).polyhedral());
  CHECK_FALSE(ConvexSet::ball({0}, 1).polyhedral());
  CHECK(ConvexSet::polyhedron(Matrix::from_rows({{1}}), {0}).polyhedral());
}

TEST_CASE("projection properties on assorted sets") {
  Rng rng(7);
  for (const auto& k : sample_sets()) {
    CAPTURE(k.type_name());
    for (int t = 0; t < 100; ++t) {
      const Vec z1 = random_vec(rng, 3, 4), z2 = random_vec(rng, 3, 4);
      const Vec p1 = k.project(z1), p2 = k.project(z2);
      CHECK(distance(k.project(p1), p1) <= 1e-10);
      CHECK(distance(p1, p2) <= distance(z1, z2) + 1e-10);
      CHECK(k.contains(p1, 1e-8));
      const Vec y = k.project(random_vec(rng, 3, 4));
      double vi = 0.0;
      for (std::size_t i = 0; i < 3; ++i) vi += (z1[i] - p1[i]) * (y[i] - p1[i]);
      CHECK(vi <= 1e-10);
    }
  }
}

TEST_CASE("polyhedral projection matches the KKT oracle") {
  Rng rng(2024);
  int compared = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng.below(2);
    const std::size_t k = 2 + rng.below(4);
    // Random half-spaces through points near the origin keep the set nonempty.
    oracle::Rows a(k, oracle::Vec(n));
    oracle::Vec b(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (double& v : a[i]) v = rng.uniform(-1, 1);
      b[i] = rng.uniform(0.1, 1.0);
    }
    const auto set = ConvexSet::polyhedron(Matrix::from_rows(a), b);
    for (int s = 0; s < 5; ++s) {
      const Vec z = random_vec(rng, n, 3);
      const auto ref = oracle::kkt_project(a, b, z);
      REQUIRE(ref);
      CHECK(distance(set.project(z), *ref) <= 1e-8);
      ++compared;
    }
  }
  CHECK(compared == 100);
}

TEST_CASE("projection dimension mismatch") {
  const double z[] = {1.0};
  CHECK_THROWS_AS(ConvexSet::whole_space(2).project(z), std::invalid_argument);
}
