#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vvi/linalg.hpp"

namespace vvi {

class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dykstra stopping rule for sets without a closed-form projection.
struct ProjectionOptions {
  double tol = 1e-12;  // per-cycle change, scaled by max(1, |x|)
  std::size_t max_cycles = 10000;
};

/// Nonempty closed convex K with a Euclidean projection. Unbounded box sides
/// are IEEE infinities.
class ConvexSet {
 public:
  struct WholeSpace {
    std::size_t n;
  };
  struct Box {
    Vec lower;
    Vec upper;
  };
  struct Ball {
    Vec center;
    double radius;
  };
  struct Polyhedron {
    Matrix a;  // {x : a x <= b}
    Vec b;
    Vec feasible_point;
  };
  /// base ∩ Ball(0, radius), projected by bisection on the ball multiplier.
  struct BallIntersection {
    std::shared_ptr<const ConvexSet> base;
    double radius;
  };
  using Variant = std::variant<WholeSpace, Box, Ball, Polyhedron, BallIntersection>;

  static ConvexSet whole_space(std::size_t n);
  static ConvexSet box(Vec lower, Vec upper);
  static ConvexSet ball(Vec center, double radius);
  /// Without a feasible point one is found by projecting the origin; throws
  /// std::invalid_argument if the system looks infeasible.
  static ConvexSet polyhedron(Matrix a, Vec b, std::optional<Vec> feasible_point = std::nullopt,
                              ProjectionOptions opts = {});

  std::size_t dimension() const { return n_; }
  bool polyhedral() const;
  bool bounded() const;
  std::string type_name() const;
  const Variant& variant() const { return *rep_; }

  /// Throws ProjectionError when Dykstra does not settle within max_cycles.
  Vec project(std::span<const double> z) const;
  bool contains(std::span<const double> x, double tol) const;

  const ProjectionOptions& projection_options() const { return opts_; }

 private:
  ConvexSet(std::size_t n, std::shared_ptr<const Variant> rep, ProjectionOptions opts = {})
      : n_(n), rep_(std::move(rep)), opts_(opts) {}
  friend ConvexSet intersect_ball(const ConvexSet& k, double radius);

  std::size_t n_ = 0;
  std::shared_ptr<const Variant> rep_;
  ProjectionOptions opts_;
};

inline Vec project(const ConvexSet& k, std::span<const double> z) { return k.project(z); }
inline bool contains(const ConvexSet& k, std::span<const double> x, double tol) {
  return k.contains(x, tol);
}

/// K ∩ Ball(0, radius). Nested cases collapse to a single exact set.
ConvexSet intersect_ball(const ConvexSet& k, double radius);

}  // namespace vvi
