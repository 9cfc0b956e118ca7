#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vvi/catalog.hpp"
#include "vvi/rng.hpp"
#include "vvi/vi.hpp"

using namespace vvi;

namespace {

VectorField identity_field(std::size_t n) { return VectorField::affine(Matrix::identity(n), Vec(n, 0.0)); }

}  // namespace

TEST_CASE("simplex weights") {
  CHECK(SimplexWeight({0.25, 0.75}).interior());
  CHECK_FALSE(SimplexWeight({0.0, 1.0}).interior());
  CHECK_THROWS_AS(SimplexWeight({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(SimplexWeight({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(SimplexWeight({}), std::invalid_argument);
}

TEST_CASE("scalarize") {
  const auto q = example_q();
  const double x[] = {0.7, -1.2};
  const auto vertex = scalarize(q, SimplexWeight({1.0, 0.0}));
  CHECK(vertex(x) == q.fields()[0](x));

  const auto half = scalarize(q, SimplexWeight({0.5, 0.5}));
  const Vec h = half(x);
  CHECK(h[0] == doctest::Approx(0.7 * 0.7 * 0.7 - 0.5));
  CHECK(h[1] == doctest::Approx(-1.2 * -1.2 * -1.2 - 0.5));

  const auto p_half = scalarize(example_p(), SimplexWeight({0.5, 0.5}));
  for (double a : {-3.0, 0.0, 2.5}) {
    const double y[] = {a, -a * 0.5};
    const Vec v = p_half(y);
    CHECK(v[0] == doctest::Approx(-1.0));
    CHECK(v[1] == doctest::Approx(-1.0));
  }

  const auto aff = random_affine_vvi(3, 2, 9, AffineClass::Mixed);
  const auto s = scalarize(aff, SimplexWeight({0.3, 0.7}));
  REQUIRE(s.is_affine());
  const double z[] = {0.1, 0.2, -0.3};
  const Vec a = s(z), f0 = aff.fields()[0](z), f1 = aff.fields()[1](z);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(0.3 * f0[i] + 0.7 * f1[i]));

  CHECK_THROWS_AS(scalarize(q, SimplexWeight({1.0})), std::invalid_argument);
}

TEST_CASE("natural residual") {
  const auto q = example_q();
  const double v[] = {1.0, 0.0};
  CHECK(natural_residual(scalarize(q, SimplexWeight({0.0, 1.0})), q.constraint_set(), v) <= 1e-10);
  const auto id = identity_field(2);
  const auto r2 = ConvexSet::whole_space(2);
  const double zero[] = {0.0, 0.0}, p[] = {3.0, 4.0};
  CHECK(natural_residual(id, r2, zero) == 0.0);
  CHECK(natural_residual(id, r2, p) == doctest::Approx(5.0));
}

TEST_CASE("solve_vi on the worked examples") {
  const auto q = example_q();
  const auto out = solve_vi(scalarize(q, SimplexWeight({0.5, 0.5})), q.constraint_set(), Vec{0, 0});
  REQUIRE(out.converged());
  const double c = oracle::cube_root(0.5);
  CHECK(std::abs(out.point[0] - c) <= 1e-8);
  CHECK(std::abs(out.point[1] - c) <= 1e-8);
  CHECK(out.residual <= 1e-8);

  const auto id = solve_vi(identity_field(2), ConvexSet::whole_space(2), Vec{1, 1});
  REQUIRE(id.converged());
  CHECK(norm(id.point) <= 1e-9);

  SolverOptions opts;
  opts.divergence_radius = 1e6;
  const auto p = example_p();
  const auto empty = solve_vi(scalarize(p, SimplexWeight({0.5, 0.5})), p.constraint_set(), Vec{0, 0}, opts);
  CHECK_FALSE(empty.converged());
  CHECK(norm(empty.point) > 1e3);
  if (empty.status == SolveStatus::Diverged) CHECK(norm(empty.point) >= opts.divergence_radius);
}

TEST_CASE("converged points pass an independent residual re-check") {
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    const auto kind = static_cast<ConstraintKind>(t % 3);
    const auto prob = random_affine_vvi(1 + t % 4, 2, 100 + t, AffineClass::Mixed, kind);
    const double a = rng.uniform();
    const auto f = scalarize(prob, SimplexWeight({a, 1.0 - a}));
    const auto out = solve_vi(f, prob.constraint_set());
    if (!out.converged()) continue;
    CHECK(natural_residual(f, prob.constraint_set(), out.point) <= 1e-9);
    CHECK(prob.constraint_set().contains(out.point, 1e-6));
  }
}

TEST_CASE("residual decreases on strongly monotone affine fields without Newton steps") {
  // M = I + skew part: strongly monotone, rotational.
  const Matrix m = Matrix::from_rows({{1, 2, 0}, {-2, 1, 1}, {0, -1, 1}});
  const auto f = VectorField::affine(m, {1, -2, 0.5});
  const auto k = ConvexSet::box({-1, -1, -1}, {1, 1, 1});
  SolverOptions opts;
  opts.newton_acceleration = false;
  opts.tol = 1e-14;
  auto residual_at = [&](std::size_t iters) {
    SolverOptions o = opts;
    o.max_iter = iters;
    return solve_vi(f, k, Vec{1, 1, 1}, o).residual;
  };
  for (std::size_t it : {1, 2, 4, 8, 16, 32, 64}) CHECK(residual_at(2 * it) <= residual_at(it));
  opts.max_iter = 100000;
  CHECK(solve_vi(f, k, Vec{1, 1, 1}, opts).converged());
}

TEST_CASE("solution map is closed along a refining sequence") {
  const auto q = example_q();
  const auto& k = q.constraint_set();
  const SimplexWeight target({0.3, 0.7});
  Vec limit;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
    const auto out = solve_vi(scalarize(q, SimplexWeight({0.3 + eps, 0.7 - eps})), k);
    REQUIRE(out.converged());
    limit = out.point;
  }
  CHECK(natural_residual(scalarize(q, target), k, limit) <= 10 * 1e-9);
}

TEST_CASE("solutions persist under small weight perturbations") {
  const auto q = example_q();
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const double a = rng.uniform(0.05, 0.95);
    const double d = rng.uniform(-1e-3, 1e-3);
    const auto base = solve_vi(scalarize(q, SimplexWeight({a, 1 - a})), q.constraint_set());
    const auto pert = solve_vi(scalarize(q, SimplexWeight({a + d, 1 - a - d})), q.constraint_set(), base.point);
    REQUIRE(base.converged());
    REQUIRE(pert.converged());
    CHECK(distance(base.point, pert.point) <= 1e-2);
  }
}

TEST_CASE("solver options are validated") {
  SolverOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(solve_vi(identity_field(2), ConvexSet::whole_space(2), std::nullopt, bad), std::invalid_argument);
  SolverOptions shrink;
  shrink.shrink = 1.0;
  CHECK_THROWS_AS(shrink.validate(), std::invalid_argument);
  CHECK(parse_status("Converged") == SolveStatus::Converged);
  CHECK_FALSE(parse_status("bogus"));
}
