#include "vvi/vi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vvi {

VviProblem::VviProblem(std::string name, std::vector<VectorField> fields, ConvexSet k)
    : name_(std::move(name)), fields_(std::move(fields)), k_(std::move(k)) {
  if (fields_.empty()) throw std::invalid_argument("a VVI needs at least one criterion");
  for (std::size_t l = 0; l < fields_.size(); ++l)
    if (fields_[l].dimension() != k_.dimension())
      throw std::invalid_argument("field " + std::to_string(l + 1) + " has dimension " +
                                  std::to_string(fields_[l].dimension()) + ", K has " +
                                  std::to_string(k_.dimension()));
}

SimplexWeight::SimplexWeight(Vec weights) : w_(std::move(weights)), interior_(true) {
  if (w_.empty()) throw std::invalid_argument("simplex weight must be nonempty");
  double sum = 0.0;
  for (double v : w_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("simplex weights must be nonnegative");
    if (v == 0.0) interior_ = false;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("simplex weights must sum to 1");
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::Diverged: return "Diverged";
  }
  return "?";
}

std::optional<SolveStatus> parse_status(std::string_view s) {
  if (s == "Converged") return SolveStatus::Converged;
  if (s == "MaxIterations") return SolveStatus::MaxIterations;
  if (s == "Diverged") return SolveStatus::Diverged;
  return std::nullopt;
}

void SolverOptions::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
  if (max_iter == 0) throw std::invalid_argument("solver max_iter must be positive");
  if (!(divergence_radius > 0.0)) throw std::invalid_argument("divergence radius must be positive");
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial step must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("shrink factor must lie in (0, 1)");
  if (!(growth >= 1.0)) throw std::invalid_argument("growth factor must be >= 1");
  if (newton_period == 0) throw std::invalid_argument("newton period must be positive");
}

VectorField scalarize(const VviProblem& problem, const SimplexWeight& xi) {
  if (xi.size() != problem.m())
    throw std::invalid_argument("weight has " + std::to_string(xi.size()) + " entries, problem has " +
                                std::to_string(problem.m()) + " criteria");
  const std::size_t n = problem.n();
  const auto& fields = problem.fields();

  for (std::size_t l = 0; l < fields.size(); ++l)
    if (xi[l] == 1.0) return fields[l];

  const bool all_affine =
      std::all_of(fields.begin(), fields.end(), [](const VectorField& f) { return f.is_affine(); });
  if (all_affine) {
    Matrix m(n, n);
    Vec q(n, 0.0);
    for (std::size_t l = 0; l < fields.size(); ++l) {
      if (xi[l] == 0.0) continue;
      m = m + xi[l] * fields[l].matrix();
      for (std::size_t i = 0; i < n; ++i) q[i] += xi[l] * fields[l].offset()[i];
    }
    return VectorField::affine(std::move(m), std::move(q));
  }

  std::vector<Expression> comps(n);
  std::vector<bool> started(n, false);
  for (std::size_t l = 0; l < fields.size(); ++l) {
    if (xi[l] == 0.0) continue;
    const VectorField poly = fields[l].expanded();
    for (std::size_t i = 0; i < n; ++i) {
      Expression term = Expression::product(Expression::constant(xi[l]), poly.expressions()[i]);
      comps[i] = started[i] ? Expression::sum(std::move(comps[i]), std::move(term)) : std::move(term);
      started[i] = true;
    }
  }
  return VectorField::polynomial(std::move(comps), n);
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

class ExtragradientSolver {
 public:
  ExtragradientSolver(const VectorField& f, const ConvexSet& k, const SolverOptions& opts)
      : f_(f), k_(k), opts_(opts), n_(f.dimension()) {}

  SolveOutcome run(Vec x0) {
    x_ = k_.project(x0);
    fx_ = f_(x_);
    r_ = residual(x_, fx_);
    double lambda = opts_.initial_step;
    bool newton_streak = false;
    std::size_t iter = 0;

    for (;; ++iter) {
      if (!std::isfinite(r_)) return finish(norm(x_) > opts_.divergence_radius ? SolveStatus::Diverged
                                                                                 : SolveStatus::MaxIterations,
                                             iter);
      if (r_ <= opts_.tol) {
        iter += polish();
        return finish(SolveStatus::Converged, iter);
      }
      if (norm(x_) > opts_.divergence_radius) return finish(SolveStatus::Diverged, iter);
      if (iter >= opts_.max_iter) return finish(SolveStatus::MaxIterations, iter);

      if (opts_.newton_acceleration && (newton_streak || iter % opts_.newton_period == 0)) {
        newton_streak = try_newton(0.5);
        if (newton_streak) continue;
      }

      // Backtrack until λ|f(x) - f(x̄)| <= |x - x̄| / 2.
      bool accepted = false;
      Vec xbar, fbar;
      for (int b = 0; b < 200; ++b) {
        xbar = k_.project(shifted(x_, fx_, lambda));
        fbar = f_(xbar);
        const double dx = distance(x_, xbar);
        if (all_finite(fbar) && lambda * distance(fx_, fbar) <= 0.5 * dx) {
          accepted = true;
          break;
        }
        lambda *= opts_.shrink;
      }
      if (!accepted) return finish(SolveStatus::MaxIterations, iter);

      x_ = k_.project(shifted(x_, fbar, lambda));
      fx_ = f_(x_);
      r_ = residual(x_, fx_);
      min_step_ = std::min(min_step_, lambda);
      max_step_ = std::max(max_step_, lambda);
      lambda = std::min(lambda * opts_.growth, kMaxStep);
    }
  }

 private:
  static constexpr double kMaxStep = 1e12;

  Vec shifted(const Vec& x, const Vec& g, double step) const {
    Vec z(n_);
    for (std::size_t i = 0; i < n_; ++i) z[i] = x[i] - step * g[i];
    return z;
  }

  double residual(const Vec& x, const Vec& fx) const {
    if (!all_finite(fx)) return std::numeric_limits<double>::infinity();
    return distance(x, k_.project(shifted(x, fx, 1.0)));
  }

  // Newton step on f(x) = 0, projected onto K; kept only when it shrinks the
  // natural residual by `factor`.
  bool try_newton(double factor) {
    Vec rhs(n_);
    for (std::size_t i = 0; i < n_; ++i) rhs[i] = -fx_[i];
    auto d = solve_linear(f_.jacobian(x_), std::move(rhs));
    if (!d || !all_finite(*d)) return false;
    Vec cand(n_);
    for (std::size_t i = 0; i < n_; ++i) cand[i] = x_[i] + (*d)[i];
    cand = k_.project(cand);
    Vec fc = f_(cand);
    const double rc = residual(cand, fc);
    if (!(rc <= factor * r_)) return false;
    x_ = std::move(cand);
    fx_ = std::move(fc);
    r_ = rc;
    return true;
  }

  std::size_t polish() {
    if (!opts_.newton_acceleration) return 0;
    std::size_t steps = 0;
    while (steps < 100 && r_ > 0.0 && try_newton(0.5)) ++steps;
    return steps;
  }

  SolveOutcome finish(SolveStatus status, std::size_t iter) const {
    SolveOutcome out;
    out.status = status;
    out.point = x_;
    out.residual = r_;
    out.iterations = iter;
    out.min_step = max_step_ > 0.0 ? min_step_ : 0.0;
    out.max_step = max_step_;
    return out;
  }

  const VectorField& f_;
  const ConvexSet& k_;
  const SolverOptions& opts_;
  std::size_t n_;
  Vec x_, fx_;
  double r_ = 0.0;
  double min_step_ = std::numeric_limits<double>::infinity();
  double max_step_ = 0.0;
};

}  // namespace

double natural_residual(const VectorField& f, const ConvexSet& k, std::span<const double> x) {
  if (x.size() != f.dimension()) throw std::invalid_argument("natural_residual: dimension mismatch");
  const Vec fx = f(x);
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - fx[i];
  return distance(x, k.project(z));
}

SolveOutcome solve_vi(const VectorField& f, const ConvexSet& k, std::optional<Vec> x0, const SolverOptions& opts) {
  opts.validate();
  if (f.dimension() != k.dimension()) throw std::invalid_argument("solve_vi: field and set dimensions differ");
  Vec start = x0 ? std::move(*x0) : Vec(k.dimension(), 0.0);
  if (start.size() != k.dimension()) throw std::invalid_argument("solve_vi: x0 has wrong dimension");
  return ExtragradientSolver(f, k, opts).run(std::move(start));
}

}  // namespace vvi
