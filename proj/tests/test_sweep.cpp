#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "vvi/catalog.hpp"
#include "vvi/sweep.hpp"

using namespace vvi;

namespace {

std::vector<Vec> weights_of(const std::vector<SimplexWeight>& g) {
  std::vector<Vec> out;
  for (const auto& w : g) out.push_back(w.weights());
  return out;
}

}  // namespace

TEST_CASE("simplex grid") {
  CHECK(weights_of(simplex_grid(2, 4)) == std::vector<Vec>{{0, 1}, {0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}, {1, 0}});
  CHECK(weights_of(simplex_grid(2, 4, 0.1)) == std::vector<Vec>{{0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}});
  CHECK(simplex_grid(3, 2).size() == 6);
  CHECK(simplex_grid(3, 10).size() == 66);
  CHECK(simplex_grid(1, 5).size() == 1);
  for (const auto& w : simplex_grid(3, 7, 0.01)) CHECK(w.interior());
  CHECK_THROWS_AS(simplex_grid(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(simplex_grid(2, 4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(simplex_grid(2, 4, -0.1), std::invalid_argument);
}

TEST_CASE("lattice helpers") {
  const auto g = simplex_grid(3, 6);
  CHECK(infer_resolution(g) == 6);
  const auto c = lattice_coordinates(SimplexWeight({0.5, 1.0 / 3.0, 1.0 / 6.0}), 6);
  REQUIRE(c);
  CHECK(*c == std::vector<long>{3, 2, 1});
  CHECK_FALSE(lattice_coordinates(SimplexWeight({0.3, 0.7}), 4));
}

TEST_CASE("sweep reproduces the first example at resolution 10") {
  SweepOptions opts;
  opts.starts = 1;
  const auto cloud = sweep(example_q(), GridSpec{2, 10, 0.0}, opts);
  REQUIRE(cloud.samples.size() == 11);
  for (const auto& s : cloud.samples) {
    REQUIRE(s.converged());
    const double xi1 = s.xi[0];
    const Vec ref{oracle::cube_root(1 - xi1), oracle::cube_root(xi1)};
    CHECK(distance(s.outcome.point, ref) <= 1e-6);
  }
}

TEST_CASE("sweep on the second example leaves xi1 = 1/2 empty") {
  SweepOptions opts;
  opts.starts = 1;
  const auto cloud = sweep(example_p(), GridSpec{2, 10, 0.0}, opts);
  REQUIRE(cloud.samples.size() == 11);
  std::size_t converged = 0;
  for (const auto& s : cloud.samples) {
    const double xi1 = s.xi[0];
    if (xi1 == 0.5) {
      CHECK_FALSE(s.converged());
      continue;
    }
    REQUIRE(s.converged());
    ++converged;
    const double t = 2 * xi1 - 1;
    const Vec ref{1.0 / oracle::cube_root(t), -1.0 / t};
    CHECK(distance(s.outcome.point, ref) <= 1e-6);
  }
  CHECK(converged == 10);
}

TEST_CASE("single-criterion problems sweep one weight") {
  const auto one = random_affine_vvi(2, 1, 3, AffineClass::Symmetric);
  const auto cloud = sweep(one, GridSpec{1, 10, 0.0});
  REQUIRE(cloud.samples.size() == 1);
  CHECK(cloud.samples[0].xi.weights() == Vec{1.0});
}

TEST_CASE("classify_samples") {
  const auto cloud = sweep(example_q(), GridSpec{2, 10, 0.0});
  const auto c = classify_samples(cloud, true);
  CHECK(c.pareto_status == ParetoStatus::Exact);
  CHECK(c.weak.size() == 11);
  CHECK(c.proper.size() == 9);
  for (std::size_t i : c.proper) CHECK(std::find(c.weak.begin(), c.weak.end(), i) != c.weak.end());
  CHECK(classify_samples(cloud, false).pareto_status == ParetoStatus::BracketedOnly);
}

TEST_CASE("converged samples satisfy the residual and membership invariants") {
  for (const auto& name : catalog_sample_names()) {
    CAPTURE(name);
    const auto prob = catalog_problem(name);
    const auto cloud = sweep(prob, GridSpec{prob.m(), prob.m() == 2 ? 20u : 6u, 0.0});
    for (const auto& s : cloud.samples) {
      if (!s.converged()) continue;
      CHECK(natural_residual(scalarize(prob, s.xi), prob.constraint_set(), s.outcome.point) <= 1e-9);
      CHECK(prob.constraint_set().contains(s.outcome.point, 1e-6));
    }
  }
}

TEST_CASE("sweep is deterministic and independent of thread count") {
  const auto prob = random_affine_vvi(3, 3, 21, AffineClass::Mixed, ConstraintKind::Simplex);
  SweepOptions opts;
  opts.seed = 99;
  const std::string a = cloud_csv(sweep(prob, GridSpec{3, 8, 0.0}, opts));
  const std::string b = cloud_csv(sweep(prob, GridSpec{3, 8, 0.0}, opts));
  opts.threads = 4;
  const std::string c = cloud_csv(sweep(prob, GridSpec{3, 8, 0.0}, opts));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("cloud CSV round trip") {
  const auto cloud = sweep(example_p(), GridSpec{2, 10, 0.0});
  const std::string text = cloud_csv(cloud);
  CHECK(text.rfind("xi_1,xi_2,interior,status,iterations,residual,x_1,x_2\n", 0) == 0);
  std::istringstream in(text);
  const auto back = read_cloud_csv(in, "example-p");
  CHECK(back.resolution == 10);
  CHECK(back.m == 2);
  CHECK(back.n == 2);
  REQUIRE(back.samples.size() == cloud.samples.size());
  for (std::size_t i = 0; i < back.samples.size(); ++i) {
    CHECK(back.samples[i].xi.weights() == cloud.samples[i].xi.weights());
    CHECK(back.samples[i].outcome.point == cloud.samples[i].outcome.point);
    CHECK(back.samples[i].outcome.status == cloud.samples[i].outcome.status);
  }
  CHECK(cloud_csv(back) == text);
}

TEST_CASE("malformed cloud CSV is rejected") {
  std::istringstream bad_header("a,b,c\n");
  CHECK_THROWS_AS(read_cloud_csv(bad_header), std::runtime_error);
  std::istringstream bad_row("xi_1,xi_2,interior,status,iterations,residual,x_1\n0.5,0.5,1,Converged,3,0\n");
  CHECK_THROWS_WITH(read_cloud_csv(bad_row), doctest::Contains("line 2"));
  std::istringstream bad_status("xi_1,xi_2,interior,status,iterations,residual,x_1\n0.5,0.5,1,Maybe,3,0,1\n");
  CHECK_THROWS_AS(read_cloud_csv(bad_status), std::runtime_error);
  std::istringstream header_only("xi_1,xi_2,interior,status,iterations,residual,x_1\n");
  const auto empty = read_cloud_csv(header_only);
  CHECK(empty.samples.empty());
  CHECK(empty.m == 2);
  CHECK(empty.n == 1);
}

TEST_CASE("domain coverage") {
  const auto q = sweep(example_q(), GridSpec{2, 10, 0.0});
  CHECK(domain_coverage(q) == 1.0);
  const auto p = sweep(example_p(), GridSpec{2, 10, 0.0});
  CHECK(domain_coverage(p) == doctest::Approx(10.0 / 11.0));
  CHECK(domain_coverage(p, true) == doctest::Approx(8.0 / 9.0));
}
