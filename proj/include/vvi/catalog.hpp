#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vvi/problem.hpp"

namespace vvi {

/// Bicriteria problem on R²: F1 = (x1³, x2³ - 1), F2 = (x1³ - 1, x2³).
/// Symmetric monotone; weak Pareto set is a bounded arc.
VviProblem example_q();
/// S(ξ1, 1 - ξ1) for example_q: (∛(1 - ξ1), ∛ξ1). Throws std::domain_error
/// outside [0, 1].
Vec closed_form_q(double xi1);

/// Bicriteria problem on R²: F1 = (-x2 - 1, x1³ - 1), F2 = (x2 - 1, -x1³ - 1).
/// Weak Pareto set has two unbounded branches; S is empty at ξ1 = 1/2.
VviProblem example_p();
/// (1/∛(2ξ1 - 1), -1/(2ξ1 - 1)), or nullopt at ξ1 = 1/2.
std::optional<Vec> closed_form_p(double xi1);

/// F1 = x, F2 = x - e1 on R². The vertex ξ = (1, 0) gives x = 0, which is a
/// weak Pareto point but not a Pareto point.
VviProblem weak_gap_example();

enum class AffineClass { Symmetric, Skew, Mixed };
enum class ConstraintKind { WholeSpace, Box, Simplex };

std::optional<AffineClass> parse_affine_class(std::string_view s);
std::string_view to_string(AffineClass c);
std::optional<ConstraintKind> parse_constraint_kind(std::string_view s);
std::string_view to_string(ConstraintKind k);

/// F_l(x) = M_l x + q_l with entries drawn from [-1, 1]:
///   Symmetric: M = BᵀB, Skew: M = A - Aᵀ, Mixed: BᵀB + A - Aᵀ.
/// K: R^n, the box [-1, 1]^n, or {x >= -1, Σx <= 1}.
VviProblem random_affine_vvi(std::size_t n, std::size_t m, std::uint64_t seed, AffineClass cls,
                             ConstraintKind k = ConstraintKind::Box);

/// `example-q`, `example-p`, `weak-gap`, or
/// `random-affine:<class>:<n>:<m>:<seed>[:<whole|box|simplex>]`.
/// Throws std::invalid_argument for unknown names.
VviProblem catalog_problem(std::string_view name);

/// Representative catalog entries used by audits.
std::vector<std::string> catalog_sample_names();

}  // namespace vvi
