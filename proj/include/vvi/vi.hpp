#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "vvi/expr.hpp"
#include "vvi/geometry.hpp"
#include "vvi/problem.hpp"

namespace vvi {

/// A point of the unit simplex Δ. `interior()` marks ri Δ (all weights > 0).
class SimplexWeight {
 public:
  /// Throws std::invalid_argument on negative weights or |sum - 1| > 1e-12.
  explicit SimplexWeight(Vec weights);

  const Vec& weights() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t l) const { return w_[l]; }
  bool interior() const { return interior_; }

 private:
  Vec w_;
  bool interior_;
};

enum class SolveStatus { Converged, MaxIterations, Diverged };

std::string_view to_string(SolveStatus s);
std::optional<SolveStatus> parse_status(std::string_view s);

struct SolverOptions {
  double tol = 1e-9;
  std::size_t max_iter = 200000;
  double divergence_radius = 1e8;
  double initial_step = 1.0;
  double shrink = 0.5;
  double growth = 1.05;
  /// Safeguarded Newton steps on the field, accepted only when they halve
  /// the natural residual. Also polishes converged points.
  bool newton_acceleration = true;
  std::size_t newton_period = 10;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::MaxIterations;
  Vec point;
  double residual = 0.0;
  std::size_t iterations = 0;
  double min_step = 0.0;
  double max_step = 0.0;

  bool converged() const { return status == SolveStatus::Converged; }
};

/// F_ξ = Σ ξ_l F_l. All-affine problems combine matrices directly; zero
/// weights drop out and a vertex weight returns its field unchanged.
VectorField scalarize(const VviProblem& problem, const SimplexWeight& xi);

/// |x - P_K(x - f(x))|, zero exactly on Sol(f, K).
double natural_residual(const VectorField& f, const ConvexSet& k, std::span<const double> x);

/// Extragradient with backtracking:
///   x̄ = P_K(x - λ f(x)),  x⁺ = P_K(x - λ f(x̄)),
/// λ halved until λ|f(x) - f(x̄)| <= |x - x̄| / 2, then grown by 5%.
/// x0 defaults to P_K(0).
SolveOutcome solve_vi(const VectorField& f, const ConvexSet& k, std::optional<Vec> x0 = std::nullopt,
                      const SolverOptions& opts = {});

}  // namespace vvi
