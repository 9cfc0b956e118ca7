#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vvi/problem.hpp"

namespace vvi {

/// Cube [lower, upper]^n that seeds sample points; they are then projected onto K.
struct SamplingBox {
  double lower = -2.0;
  double upper = 2.0;
};

struct MonotoneWitness {
  std::size_t field = 0;
  Vec x;
  Vec y;
  double pairing = 0.0;  // <F_l(y) - F_l(x), y - x>
};

struct MonotoneReport {
  bool monotone_certified = false;
  double min_pairing = 0.0;
  double min_eig = 0.0;
  std::optional<MonotoneWitness> witness;  // most negative pair seen
};

/// Sampled monotonicity check: pair inner products plus the smallest
/// eigenvalue of the symmetrized Jacobian. Certified iff both minima are
/// >= -1e-9. Throws std::invalid_argument if samples == 0.
MonotoneReport check_monotone(const VviProblem& problem, std::size_t samples, std::uint64_t seed,
                              SamplingBox box = {});

enum class SymmetryClass { Symmetric, SkewSymmetric, Neither };
std::string_view to_string(SymmetryClass c);

struct SymmetryReport {
  SymmetryClass symmetry_class = SymmetryClass::Neither;
  double max_sym_defect = 0.0;   // max |J - J^T|_inf
  double max_skew_defect = 0.0;  // max |J + J^T|_inf
  bool degenerate = false;       // both tests pass: every sampled Jacobian is zero
};

SymmetryReport classify_symmetry(const VviProblem& problem, std::size_t samples, std::uint64_t seed,
                                 SamplingBox box = {});

/// Sampling falsifiers. Half of the probes walk from x in random directions
/// at scales 1e-2, 1 and 1e2; the other half head toward `cloud_points`
/// (all probes are random directions when no points are given). Every probe
/// is projected onto K. Throws std::invalid_argument if x is not in K
/// (tolerance 1e-6) or has the wrong dimension.
///
/// Weak witness: <F_l(x), y - x> < -1e-9 max(1, |y - x|) for every l.
std::optional<Vec> falsify_weak_pareto(const VviProblem& problem, std::span<const double> x, std::size_t probes,
                                       std::uint64_t seed, std::span<const Vec> cloud_points = {});

/// Pareto witness: every pairing <= 1e-12 max(1, |y - x|) and at least one
/// < -1e-9 max(1, |y - x|).
std::optional<Vec> falsify_pareto(const VviProblem& problem, std::span<const double> x, std::size_t probes,
                                  std::uint64_t seed, std::span<const Vec> cloud_points = {});

}  // namespace vvi
