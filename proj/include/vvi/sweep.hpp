#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vvi/problem.hpp"
#include "vvi/vi.hpp"

namespace vvi {

/// Grid samples come from simplex_grid; bridge samples are added later by
/// the topology module when it checks continuity between lattice neighbours.
enum class SampleOrigin { Grid, Bridge };

struct SolutionSample {
  SimplexWeight xi;
  SolveOutcome outcome;
  std::size_t start_index = 0;
  SampleOrigin origin = SampleOrigin::Grid;

  bool converged() const { return outcome.converged(); }
};

/// Sampled graph of ξ ↦ Sol(F_ξ, K). Per grid weight: the deduplicated
/// converged solutions, or a single failed outcome when no start converged.
struct SolutionCloud {
  std::string problem_name;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t resolution = 0;  // 0 when the weights are not a lattice
  double interior_margin = 0.0;
  std::vector<SolutionSample> samples;
};

struct GridSpec {
  std::size_t m = 2;
  std::size_t resolution = 10;
  double interior_margin = 0.0;
};

/// Lattice points {k / resolution} of Δ in lexicographic order of the
/// integer coordinates (ξ_1 ascending). With a positive margin only points
/// with min ξ_l >= margin are kept. Throws std::invalid_argument when
/// resolution < 1 or margin is outside [0, 1/m).
std::vector<SimplexWeight> simplex_grid(std::size_t m, std::size_t resolution, double interior_margin = 0.0);

/// Largest lattice step consistent with the weights, 0 if they are not on a
/// common lattice. A single-criterion grid reports 1.
std::size_t infer_resolution(std::span<const SimplexWeight> weights);

/// Integer lattice coordinates round(ξ * resolution), if ξ is on the lattice.
std::optional<std::vector<long>> lattice_coordinates(const SimplexWeight& xi, std::size_t resolution);

struct SweepOptions {
  std::size_t starts = 3;
  std::uint64_t seed = 0;
  double start_radius = 1.0;  // random starts: P_K(x_default + U[-r, r]^n)
  double dedup_tol = 1e-6;
  SolverOptions solver;
  unsigned threads = 1;  // 0 = hardware concurrency
};

/// Solves VI(F_ξ, K) at every grid weight. Output order follows the grid
/// regardless of thread count; identical inputs give identical clouds.
SolutionCloud sweep(const VviProblem& problem, std::span<const SimplexWeight> grid, const SweepOptions& opts = {});
SolutionCloud sweep(const VviProblem& problem, const GridSpec& spec, const SweepOptions& opts = {});

enum class ParetoStatus { Exact, BracketedOnly };

struct SampleClassification {
  std::vector<std::size_t> weak;    // converged samples
  std::vector<std::size_t> proper;  // converged samples with interior ξ
  ParetoStatus pareto_status = ParetoStatus::BracketedOnly;
};

/// On polyhedral K the Pareto set equals the proper set (Exact); otherwise
/// it is only bracketed between the proper and weak sets.
SampleClassification classify_samples(const SolutionCloud& cloud, bool polyhedral);

/// Fraction of distinct grid weights carrying at least one converged sample.
double domain_coverage(const SolutionCloud& cloud, bool interior_only = false);

/// Columns: xi_1..xi_m, interior, status, iterations, residual, x_1..x_n.
/// Numbers use %.17g.
void write_cloud_csv(const SolutionCloud& cloud, std::ostream& out);
std::string cloud_csv(const SolutionCloud& cloud);
/// Throws std::runtime_error with a line number on malformed input.
SolutionCloud read_cloud_csv(std::istream& in, std::string problem_name = {});

unsigned resolve_thread_count(unsigned requested);

}  // namespace vvi
