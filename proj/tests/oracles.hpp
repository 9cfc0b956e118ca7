// Independent reference computations for the test suites. Nothing here
// calls into the library's numerics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Rows = std::vector<Vec>;

// Dense Gauss-Jordan with partial pivoting; nullopt when singular.
inline std::optional<Vec> gauss_solve(Rows a, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-12) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

// Projection onto {x : a x <= b} by enumerating active sets and keeping the
// KKT point (primal feasible, multipliers >= 0) closest to z.
inline std::optional<Vec> kkt_project(const Rows& a, const Vec& b, const Vec& z) {
  const std::size_t k = a.size(), n = z.size();
  std::optional<Vec> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) act.push_back(i);
    if (act.size() > n) continue;
    // x = z - A_S^T λ with A_S A_S^T λ = A_S z - b_S.
    Vec lambda;
    if (!act.empty()) {
      Rows g(act.size(), Vec(act.size()));
      Vec rhs(act.size());
      for (std::size_t r = 0; r < act.size(); ++r) {
        for (std::size_t c = 0; c < act.size(); ++c)
          for (std::size_t j = 0; j < n; ++j) g[r][c] += a[act[r]][j] * a[act[c]][j];
        for (std::size_t j = 0; j < n; ++j) rhs[r] += a[act[r]][j] * z[j];
        rhs[r] -= b[act[r]];
      }
      auto sol = gauss_solve(g, rhs);
      if (!sol) continue;
      lambda = *sol;
      if (std::any_of(lambda.begin(), lambda.end(), [](double l) { return l < -1e-12; })) continue;
    }
    Vec x = z;
    for (std::size_t r = 0; r < act.size(); ++r)
      for (std::size_t j = 0; j < n; ++j) x[j] -= lambda[r] * a[act[r]][j];
    bool feasible = true;
    for (std::size_t i = 0; i < k && feasible; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a[i][j] * x[j];
      feasible = s <= b[i] + 1e-10 * std::max(1.0, std::abs(b[i]));
    }
    if (!feasible) continue;
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) d += (x[j] - z[j]) * (x[j] - z[j]);
    if (d < best_dist) {
      best_dist = d;
      best = x;
    }
  }
  return best;
}

inline double central_difference(const std::function<double(const Vec&)>& f, Vec x, std::size_t i,
                                 double h = 1e-5) {
  const double xi = x[i];
  x[i] = xi + h;
  const double up = f(x);
  x[i] = xi - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

// Real cube root by bisection, no std::cbrt.
inline double cube_root(double v) {
  if (v == 0.0) return 0.0;
  const double s = v < 0 ? -1.0 : 1.0;
  const double a = std::abs(v);
  double lo = 0.0, hi = std::max(1.0, a);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid * mid * mid < a) lo = mid;
    else hi = mid;
  }
  return s * 0.5 * (lo + hi);
}

// Dense grid search for y in a 2-D box dominating x: every <F_l(x), y - x>
// <= 0 with at least one strictly negative (Pareto) or all strictly
// negative (weak).
struct GridDominance {
  bool weak = false;
  bool pareto = false;
};

inline GridDominance grid_dominance(const std::vector<Vec>& fx, const Vec& x, double lo, double hi,
                                    std::size_t steps) {
  GridDominance out;
  for (std::size_t i = 0; i <= steps; ++i)
    for (std::size_t j = 0; j <= steps; ++j) {
      const double y0 = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps);
      const double y1 = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(steps);
      bool all_neg = true, none_pos = true, some_neg = false;
      for (const Vec& f : fx) {
        const double p = f[0] * (y0 - x[0]) + f[1] * (y1 - x[1]);
        all_neg = all_neg && p < -1e-12;
        none_pos = none_pos && p <= 1e-12;
        some_neg = some_neg || p < -1e-12;
      }
      out.weak = out.weak || all_neg;
      out.pareto = out.pareto || (none_pos && some_neg);
    }
  return out;
}

}  // namespace oracle
