#include "vvi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vvi {

namespace {

struct HalfSpace {
  Vec a;
  double b;
  double a_sq;
};

using Factor = std::variant<HalfSpace, ConvexSet::Box, ConvexSet::Ball>;

void project_box(const ConvexSet::Box& box, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box.lower[i], box.upper[i]);
}

void project_ball(const ConvexSet::Ball& ball, std::span<double> x) {
  const double d = distance(x, ball.center);
  if (d <= ball.radius) return;
  const double s = ball.radius / d;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = ball.center[i] + s * (x[i] - ball.center[i]);
}

void project_half_space(const HalfSpace& h, std::span<double> x) {
  const double v = dot(h.a, x) - h.b;
  if (v <= 0.0) return;
  const double s = v / h.a_sq;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= s * h.a[i];
}

void project_factor(const Factor& f, std::span<double> x) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HalfSpace>) project_half_space(s, x);
        else if constexpr (std::is_same_v<T, ConvexSet::Box>) project_box(s, x);
        else project_ball(s, x);
      },
      f);
}

std::vector<HalfSpace> half_spaces(const ConvexSet::Polyhedron& p) {
  std::vector<HalfSpace> out;
  for (std::size_t i = 0; i < p.a.rows(); ++i) {
    Vec a(p.a.row(i).begin(), p.a.row(i).end());
    const double a_sq = dot(a, a);
    if (a_sq == 0.0) continue;  // 0 <= b_i, checked at construction
    out.push_back({std::move(a), p.b[i], a_sq});
  }
  return out;
}

// Dykstra's alternating projection with per-factor correction terms.
Vec dykstra(const std::vector<Factor>& factors, std::span<const double> z, const ProjectionOptions& opts) {
  const std::size_t n = z.size();
  Vec x(z.begin(), z.end());
  if (factors.size() == 1) {
    project_factor(factors.front(), x);
    return x;
  }
  std::vector<Vec> incr(factors.size(), Vec(n, 0.0));
  Vec y(n), prev(n);
  for (std::size_t cycle = 0; cycle < opts.max_cycles; ++cycle) {
    prev = x;
    double incr_change = 0.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + incr[k][i];
      x = y;
      project_factor(factors[k], x);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = y[i] - x[i];
        const double d = p - incr[k][i];
        incr_change += d * d;
        incr[k][i] = p;
      }
    }
    const double scale = std::max(1.0, norm(x));
    const double tol = opts.tol * scale;
    if (distance(x, prev) <= tol && std::sqrt(incr_change) <= tol) return x;
  }
  throw ProjectionError("Dykstra projection did not converge within " + std::to_string(opts.max_cycles) +
                        " cycles");
}

// P onto K ∩ Ball(0, r) equals P_K(z / (1 + mu)) for the ball multiplier
// mu >= 0, and |P_K(z / (1 + mu))| is nonincreasing in mu: bisect on mu.
Vec project_capped(const ConvexSet& base, double r, std::span<const double> z) {
  auto at = [&](double mu) {
    Vec s(z.begin(), z.end());
    for (double& v : s) v /= 1.0 + mu;
    return base.project(s);
  };
  const double cap = r * (1.0 + 1e-14);
  Vec hi_point = at(0.0);
  if (norm(hi_point) <= cap) return hi_point;
  double lo = 0.0, hi = 1.0;
  hi_point = at(hi);
  while (norm(hi_point) > cap) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw ProjectionError("ball intersection appears empty");
    hi_point = at(hi);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Vec p = at(mid);
    if (norm(p) > cap) {
      lo = mid;
    } else {
      hi = mid;
      hi_point = std::move(p);
    }
  }
  return hi_point;
}

std::vector<Factor> factors_of(const ConvexSet& k) {
  std::vector<Factor> out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConvexSet::WholeSpace>) {
        } else if constexpr (std::is_same_v<T, ConvexSet::Box> || std::is_same_v<T, ConvexSet::Ball>) {
          out.push_back(s);
        } else if constexpr (std::is_same_v<T, ConvexSet::Polyhedron>) {
          for (auto& h : half_spaces(s)) out.push_back(std::move(h));
        } else {
          out = factors_of(*s.base);
          out.push_back(ConvexSet::Ball{Vec(k.dimension(), 0.0), s.radius});
        }
      },
      k.variant());
  return out;
}

void require_dim(std::span<const double> x, std::size_t n) {
  if (x.size() != n)
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) + ", set has " +
                                std::to_string(n));
}

}  // namespace

ConvexSet ConvexSet::whole_space(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  return ConvexSet(n, std::make_shared<const Variant>(WholeSpace{n}));
}

ConvexSet ConvexSet::box(Vec lower, Vec upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("box bounds must be nonempty and of equal length");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i])) throw std::invalid_argument("box bound is NaN");
    if (lower[i] > upper[i])
      throw std::invalid_argument("box lower bound exceeds upper bound at index " + std::to_string(i));
    if (lower[i] == std::numeric_limits<double>::infinity() || upper[i] == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("box side is empty at index " + std::to_string(i));
  }
  const std::size_t n = lower.size();
  return ConvexSet(n, std::make_shared<const Variant>(Box{std::move(lower), std::move(upper)}));
}

ConvexSet ConvexSet::ball(Vec center, double radius) {
  if (center.empty()) throw std::invalid_argument("ball center must be nonempty");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
  const std::size_t n = center.size();
  return ConvexSet(n, std::make_shared<const Variant>(Ball{std::move(center), radius}));
}

ConvexSet ConvexSet::polyhedron(Matrix a, Vec b, std::optional<Vec> feasible_point, ProjectionOptions opts) {
  if (a.rows() == 0) throw std::invalid_argument("polyhedron needs at least one inequality");
  if (a.cols() == 0) throw std::invalid_argument("polyhedron dimension must be positive");
  if (b.size() != a.rows()) throw std::invalid_argument("polyhedron: A and b row counts differ");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double a_sq = 0.0;
    for (double v : a.row(i)) a_sq += v * v;
    if (a_sq == 0.0 && b[i] < 0.0)
      throw std::invalid_argument("polyhedron row " + std::to_string(i) + " reads 0 <= negative");
  }
  const std::size_t n = a.cols();
  Polyhedron p{std::move(a), std::move(b), {}};
  if (feasible_point) {
    require_dim(*feasible_point, n);
    p.feasible_point = std::move(*feasible_point);
  }
  ConvexSet set(n, std::make_shared<const Variant>(p), opts);
  if (!feasible_point) {
    Vec origin(n, 0.0);
    Vec x;
    try {
      x = set.project(origin);
    } catch (const ProjectionError&) {
      throw std::invalid_argument("polyhedron appears to be empty (projection did not settle)");
    }
    if (!set.contains(x, 1e-8)) throw std::invalid_argument("polyhedron appears to be empty");
    p.feasible_point = std::move(x);
    return ConvexSet(n, std::make_shared<const Variant>(std::move(p)), opts);
  }
  if (!set.contains(p.feasible_point, 1e-9))
    throw std::invalid_argument("supplied feasible point violates the polyhedron");
  return set;
}

bool ConvexSet::polyhedral() const {
  return std::holds_alternative<WholeSpace>(*rep_) || std::holds_alternative<Box>(*rep_) ||
         std::holds_alternative<Polyhedron>(*rep_);
}

bool ConvexSet::bounded() const {
  return std::visit(
      [](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WholeSpace>) return false;
        else if constexpr (std::is_same_v<T, Box>) {
          for (std::size_t i = 0; i < s.lower.size(); ++i)
            if (!std::isfinite(s.lower[i]) || !std::isfinite(s.upper[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Ball> || std::is_same_v<T, BallIntersection>) {
          return true;
        } else {
          return false;  // not decided for general polyhedra
        }
      },
      *rep_);
}

std::string ConvexSet::type_name() const {
  static const char* names[] = {"whole_space", "box", "ball", "polyhedron", "ball_intersection"};
  return names[rep_->index()];
}

Vec ConvexSet::project(std::span<const double> z) const {
  require_dim(z, n_);
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        Vec x(z.begin(), z.end());
        if constexpr (std::is_same_v<T, WholeSpace>) {
          return x;
        } else if constexpr (std::is_same_v<T, Box>) {
          project_box(s, x);
          return x;
        } else if constexpr (std::is_same_v<T, Ball>) {
          project_ball(s, x);
          return x;
        } else if constexpr (std::is_same_v<T, BallIntersection>) {
          if (contains(z, 0.0)) return x;
          return project_capped(*s.base, s.radius, z);
        } else {
          if (contains(z, 0.0)) return x;
          return dykstra(factors_of(*this), z, opts_);
        }
      },
      *rep_);
}

bool ConvexSet::contains(std::span<const double> x, double tol) const {
  require_dim(x, n_);
  if (tol < 0.0) throw std::invalid_argument("contains: tolerance must be nonnegative");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WholeSpace>) {
          for (double v : x)
            if (!std::isfinite(v)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Box>) {
          for (std::size_t i = 0; i < n_; ++i)
            if (!(x[i] >= s.lower[i] - tol && x[i] <= s.upper[i] + tol)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return distance(x, s.center) <= s.radius + tol;
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          for (std::size_t i = 0; i < s.a.rows(); ++i)
            if (!(dot(s.a.row(i), x) <= s.b[i] + tol)) return false;
          return true;
        } else {
          return norm(x) <= s.radius + tol && s.base->contains(x, tol);
        }
      },
      *rep_);
}

ConvexSet intersect_ball(const ConvexSet& k, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("intersect_ball: radius must be positive");
  const std::size_t n = k.dimension();
  const Vec origin(n, 0.0);
  using CS = ConvexSet;
  auto composite = [&](std::shared_ptr<const CS> base, double r) {
    return CS(n, std::make_shared<const CS::Variant>(CS::BallIntersection{std::move(base), r}),
              k.projection_options());
  };
  return std::visit(
      [&](const auto& s) -> ConvexSet {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CS::WholeSpace>) {
          return CS::ball(origin, radius);
        } else if constexpr (std::is_same_v<T, CS::Ball>) {
          const double c = norm(s.center);
          if (c + s.radius <= radius) return k;
          if (c + radius <= s.radius) return CS::ball(origin, radius);
          return composite(std::make_shared<const CS>(k), radius);
        } else if constexpr (std::is_same_v<T, CS::Box>) {
          double far_sq = 0.0;
          for (std::size_t i = 0; i < n; ++i)
            far_sq += std::max(s.lower[i] * s.lower[i], s.upper[i] * s.upper[i]);
          if (std::sqrt(far_sq) <= radius) return k;
          return composite(std::make_shared<const CS>(k), radius);
        } else if constexpr (std::is_same_v<T, CS::Polyhedron>) {
          return composite(std::make_shared<const CS>(k), radius);
        } else {
          return intersect_ball(*s.base, std::min(s.radius, radius));
        }
      },
      k.variant());
}

}  // namespace vvi
