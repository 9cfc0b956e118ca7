#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "vvi/catalog.hpp"
#include "vvi/sweep.hpp"
#include "vvi/topology.hpp"

using namespace vvi;

namespace {

SolutionSample converged_at(Vec xi, Vec point) {
  SolveOutcome o;
  o.status = SolveStatus::Converged;
  o.point = std::move(point);
  return {SimplexWeight(std::move(xi)), o, 0, SampleOrigin::Grid};
}

SolutionCloud bridged_cloud(const VviProblem& p, std::size_t res, double delta, ComponentAnalysis& out) {
  auto cloud = sweep(p, GridSpec{p.m(), res, 0.0});
  bridge_lattice_gaps(p, cloud, SampleSet::Weak, delta);
  out = build_components(cloud, SampleSet::Weak, delta);
  return cloud;
}

ComponentReport report(std::size_t id, Boundedness b) {
  ComponentReport r;
  r.id = id;
  r.members = {id};
  r.boundedness = b;
  return r;
}

}  // namespace

TEST_CASE("trivial component cases") {
  SolutionCloud cloud;
  cloud.m = 2;
  cloud.n = 2;
  cloud.samples.push_back(converged_at({0.5, 0.5}, {1.0, 2.0}));
  const auto one = build_components(cloud, SampleSet::Weak, 1e-3);
  CHECK_FALSE(one.empty_set);
  REQUIRE(one.components.size() == 1);
  CHECK(one.components[0].diameter == 0.0);
  CHECK(one.components[0].max_norm == doctest::Approx(std::sqrt(5.0)));

  cloud.samples[0].outcome.status = SolveStatus::MaxIterations;
  const auto none = build_components(cloud, SampleSet::Weak, 1.0);
  CHECK(none.empty_set);
  CHECK(none.components.empty());

  CHECK_THROWS_AS(build_components(cloud, SampleSet::Weak, 0.0), std::invalid_argument);
  CHECK(default_linking_radius(cloud, SampleSet::Weak) == 1.0);
}

TEST_CASE("proper selection drops vertex weights") {
  SolutionCloud cloud;
  cloud.m = 2;
  cloud.n = 1;
  cloud.samples.push_back(converged_at({1.0, 0.0}, {0.0}));
  cloud.samples.push_back(converged_at({0.5, 0.5}, {0.1}));
  CHECK(select_samples(cloud, SampleSet::Weak).size() == 2);
  CHECK(select_samples(cloud, SampleSet::Proper) == std::vector<std::size_t>{1});
}

TEST_CASE("components partition the sample set and respect the linking radius") {
  const auto cloud = sweep(random_affine_vvi(2, 3, 5, AffineClass::Mixed, ConstraintKind::WholeSpace),
                           GridSpec{3, 12, 0.0});
  const double base = default_linking_radius(cloud, SampleSet::Weak) / 20.0;
  std::size_t prev = SIZE_MAX;
  for (double delta : {base, 2 * base, 4 * base}) {
    const auto a = build_components(cloud, SampleSet::Weak, delta);
    std::multiset<std::size_t> seen;
    std::map<std::size_t, std::size_t> comp_of;
    for (const auto& c : a.components)
      for (std::size_t i : c.members) {
        seen.insert(i);
        comp_of[i] = c.id;
      }
    const auto sel = select_samples(cloud, SampleSet::Weak);
    CHECK(seen.size() == sel.size());
    CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == sel.size());
    for (std::size_t i : sel)
      for (std::size_t j : sel)
        if (distance(cloud.samples[i].outcome.point, cloud.samples[j].outcome.point) <= delta)
          CHECK(comp_of[i] == comp_of[j]);
    CHECK(a.components.size() <= prev);
    prev = a.components.size();
  }
}

TEST_CASE("first example is one bounded component") {
  const auto q = example_q();
  ComponentAnalysis a;
  const auto cloud = bridged_cloud(q, 100, 0.1, a);
  REQUIRE(a.components.size() == 1);
  ComponentAnalysis d;
  auto cloud_default = sweep(q, GridSpec{2, 100, 0.0});
  const double delta = default_linking_radius(cloud_default, SampleSet::Weak);
  bridge_lattice_gaps(q, cloud_default, SampleSet::Weak, delta);
  d = build_components(cloud_default, SampleSet::Weak, delta);
  REQUIRE(d.components.size() == 1);
  const auto probed = boundedness_probe(q, d.components[0], cloud_default);
  CHECK(probed.boundedness == Boundedness::Bounded);
  CHECK(probed.max_norm <= 1.3);
  const auto v = theorem_audit(std::span<const ComponentReport>(&probed, 1), AuditTarget::Weak, true, true,
                               domain_coverage(cloud_default));
  CHECK(v.consistency == Consistency::Consistent);
  CHECK(v.connected);
  CHECK(v.domain_coverage == 1.0);
}

TEST_CASE("second example has two unbounded components") {
  const auto p = example_p();
  ComponentAnalysis a;
  auto cloud = bridged_cloud(p, 100, 0.5, a);
  REQUIRE(a.components.size() == 2);
  for (auto& c : a.components) {
    c = boundedness_probe(p, c, cloud);
    CHECK(c.boundedness == Boundedness::Unbounded);
    std::vector<ProbeEntry> radial;
    for (const auto& e : c.probe_trace)
      if (e.radius) radial.push_back(e);
    REQUIRE(radial.size() == 4);
    for (std::size_t i = 2; i < 4; ++i) CHECK(radial[i].norm >= 0.99 * *radial[i].radius);
  }
  const auto v = theorem_audit(a, AuditTarget::Weak, true, false, domain_coverage(cloud));
  CHECK(v.consistency == Consistency::Consistent);
  CHECK(v.component_count == 2);
  CHECK(v.all_components_unbounded);
}

TEST_CASE("second example stays split at every resolution") {
  const auto p = example_p();
  for (std::size_t res : {20u, 21u, 50u, 100u}) {
    CAPTURE(res);
    auto cloud = sweep(p, GridSpec{2, res, 0.0});
    const double delta = default_linking_radius(cloud, SampleSet::Weak);
    // Branches live in {x1 <= -1, x2 >= 1} and {x1 >= 1, x2 <= -1}: gap >= 2 sqrt 2.
    CHECK(delta < 2.0 * std::sqrt(2.0));
    bridge_lattice_gaps(p, cloud, SampleSet::Weak, delta);
    CHECK(build_components(cloud, SampleSet::Weak, delta).components.size() == 2);
  }
}

TEST_CASE("strongly monotone single-criterion component is bounded at every radius") {
  const auto one = VviProblem("one", {VectorField::affine(Matrix::identity(2), {-1.0, 2.0})}, ConvexSet::whole_space(2));
  const auto cloud = sweep(one, GridSpec{1, 1, 0.0});
  auto a = build_components(cloud, SampleSet::Weak, 1.0);
  REQUIRE(a.components.size() == 1);
  const auto r = boundedness_probe(one, a.components[0], cloud);
  CHECK(r.boundedness == Boundedness::Bounded);
  for (const auto& e : r.probe_trace) CHECK(e.norm == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("probe argument checks") {
  const auto q = example_q();
  const auto cloud = sweep(q, GridSpec{2, 4, 0.0});
  const auto a = build_components(cloud, SampleSet::Weak, 10.0);
  ProbeOptions short_schedule;
  short_schedule.radii = {10.0};
  CHECK_THROWS_AS(boundedness_probe(q, a.components[0], cloud, short_schedule), std::invalid_argument);
  ProbeOptions unsorted;
  unsorted.radii = {100.0, 10.0};
  CHECK_THROWS_AS(boundedness_probe(q, a.components[0], cloud, unsorted), std::invalid_argument);
}

TEST_CASE("audit rules") {
  const std::vector<ComponentReport> split{report(0, Boundedness::Bounded), report(1, Boundedness::Unbounded)};
  CHECK(theorem_audit(split, AuditTarget::Weak, true, true, 1.0).consistency == Consistency::Violation);
  CHECK(theorem_audit(split, AuditTarget::Weak, true, false, 1.0).consistency == Consistency::Inconclusive);

  const std::vector<ComponentReport> far{report(0, Boundedness::Unbounded), report(1, Boundedness::Unbounded)};
  CHECK(theorem_audit(far, AuditTarget::Proper, true, true, 1.0).consistency == Consistency::Consistent);

  const std::vector<ComponentReport> vague{report(0, Boundedness::Inconclusive), report(1, Boundedness::Unbounded)};
  CHECK(theorem_audit(vague, AuditTarget::Weak, true, true, 1.0).consistency == Consistency::Inconclusive);

  const std::vector<ComponentReport> single{report(0, Boundedness::Bounded)};
  CHECK(theorem_audit(single, AuditTarget::Weak, true, true, 1.0).consistency == Consistency::Consistent);
  CHECK(theorem_audit(single, AuditTarget::Weak, true, true, 0.9).consistency == Consistency::Violation);
  CHECK(theorem_audit(single, AuditTarget::Proper, true, true, 0.9).consistency == Consistency::Consistent);

  const auto pareto = theorem_audit(split, AuditTarget::Pareto, false, true, 1.0);
  CHECK(pareto.consistency == Consistency::Inconclusive);
  CHECK_FALSE(pareto.notes.empty());
  CHECK(theorem_audit(split, AuditTarget::Pareto, true, true, 1.0).consistency == Consistency::Violation);

  const auto empty = theorem_audit(std::span<const ComponentReport>{}, AuditTarget::Proper, true, true, 0.0);
  CHECK(empty.empty_set);
  CHECK(empty.consistency == Consistency::Consistent);

  const auto violation = theorem_audit(split, AuditTarget::Weak, true, true, 1.0);
  CHECK(std::any_of(violation.notes.begin(), violation.notes.end(),
                    [](const std::string& n) { return n.find("refine") != std::string::npos; }));
}

TEST_CASE("bridging on a box-constrained symmetric problem yields one component") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto prob = random_affine_vvi(2, 2, seed, AffineClass::Symmetric);
    auto cloud = sweep(prob, GridSpec{2, 20, 0.0});
    const double delta = default_linking_radius(cloud, SampleSet::Weak);
    bridge_lattice_gaps(prob, cloud, SampleSet::Weak, delta);
    CHECK(build_components(cloud, SampleSet::Weak, delta).components.size() == 1);
  }
}

TEST_CASE("bridge samples are tagged and kept out of the CSV") {
  const auto q = example_q();
  auto cloud = sweep(q, GridSpec{2, 100, 0.0});
  const std::string before = cloud_csv(cloud);
  const auto added = bridge_lattice_gaps(q, cloud, SampleSet::Weak, 0.1);
  CHECK(added > 0);
  CHECK(cloud.samples.size() == 101 + added);
  for (std::size_t i = 101; i < cloud.samples.size(); ++i) CHECK(cloud.samples[i].origin == SampleOrigin::Bridge);
  CHECK(cloud_csv(cloud) == before);
}
