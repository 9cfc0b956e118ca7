#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vvi/problem.hpp"
#include "vvi/sweep.hpp"
#include "vvi/vi.hpp"

namespace vvi {

enum class SampleSet { Weak, Proper };
enum class Boundedness { Bounded, Unbounded, Inconclusive };

std::string_view to_string(SampleSet s);
std::string_view to_string(Boundedness b);

/// One solve made by the boundedness probe. `radius` is empty for the
/// unconstrained solves along the refined path toward the frontier weight.
struct ProbeEntry {
  std::optional<double> radius;
  double norm = 0.0;
  Vec xi;
  SolveStatus status = SolveStatus::MaxIterations;
};

struct ComponentReport {
  std::size_t id = 0;
  std::vector<std::size_t> members;  // indices into SolutionCloud::samples
  double diameter = 0.0;
  double max_norm = 0.0;
  Boundedness boundedness = Boundedness::Inconclusive;
  std::vector<ProbeEntry> probe_trace;
};

struct ComponentAnalysis {
  bool empty_set = true;  // no converged sample in the requested class
  double delta = 0.0;
  std::vector<ComponentReport> components;
};

/// Converged samples of the class, in cloud order.
std::vector<std::size_t> select_samples(const SolutionCloud& cloud, SampleSet which);

/// 5 x median nearest-neighbour distance among the distinct selected points
/// (1.0 when fewer than two distinct points exist).
double default_linking_radius(const SolutionCloud& cloud, SampleSet which);

/// Components of the δ-graph (edge iff |x_i - x_j| <= δ) on the selected
/// samples, via union-find. Components are numbered by their first member.
/// Throws std::invalid_argument if δ <= 0.
ComponentAnalysis build_components(const SolutionCloud& cloud, SampleSet which, double delta);

struct BridgeOptions {
  std::size_t max_depth = 16;
  SolverOptions solver;
};

/// For lattice-neighbouring grid samples whose δ-graph components differ,
/// bisect the weight segment, solving at each midpoint warm-started from an
/// end point, until consecutive solutions are within δ. Successful chains
/// are appended to the cloud as Bridge samples; a failed midpoint solve or
/// reaching max_depth leaves the gap open. Returns the samples added.
std::size_t bridge_lattice_gaps(const VviProblem& problem, SolutionCloud& cloud, SampleSet which, double delta,
                                const BridgeOptions& opts = {});

struct ProbeOptions {
  Vec radii{10.0, 100.0, 1000.0, 10000.0};
  std::size_t refine_levels = 10;
  SolverOptions solver;
};

/// Boundedness heuristic for one component.
///  - Refined path: from the largest-norm grid member ξ* toward each lattice
///    neighbour outside the component, weights ξ* + (1 - 2^-k)(ξ_nb - ξ*)
///    are solved on K and their norms traced.
///  - Radius solves: at the path end weight (ξ* without a frontier), solve
///    VI(F_ξ, K ∩ Ball(0, R)) for each R, warm-started.
/// Unbounded: norm >= 0.99 R at the two largest radii and the path norms
/// grow monotonically. Bounded: the last two radius solutions agree within
/// 1e-6 and lie strictly inside the ball. Otherwise Inconclusive.
/// Throws std::invalid_argument for fewer than two radii, non-increasing
/// radii, or an empty component.
ComponentReport boundedness_probe(const VviProblem& problem, const ComponentReport& component,
                                  const SolutionCloud& cloud, const ProbeOptions& opts = {});

enum class AuditTarget { Weak, Proper, Pareto };
enum class Consistency { Consistent, Violation, Inconclusive };

std::string_view to_string(AuditTarget t);
std::string_view to_string(Consistency c);

struct TheoremVerdict {
  std::size_t component_count = 0;
  bool empty_set = false;
  bool all_components_unbounded = false;
  bool bounded_and_nonempty = false;
  bool connected = false;
  double domain_coverage = 0.0;
  Consistency consistency = Consistency::Inconclusive;
  std::vector<std::string> notes;
};

/// Cross-checks the component reports against the connectedness theorems:
///  (i)   two or more components => each should be Unbounded;
///  (ii)  all components Bounded  => exactly one component;
///  (iii) weak set bounded and nonempty => every grid weight has a solution;
///  (iv)  the Pareto target is audited only on polyhedral K.
/// A failed check is a Violation when monotonicity is certified, otherwise
/// the theorems do not apply and the verdict is Inconclusive.
TheoremVerdict theorem_audit(std::span<const ComponentReport> reports, AuditTarget which, bool polyhedral,
                             bool monotone_certified, double domain_coverage);
TheoremVerdict theorem_audit(const ComponentAnalysis& analysis, AuditTarget which, bool polyhedral,
                             bool monotone_certified, double domain_coverage);

}  // namespace vvi
