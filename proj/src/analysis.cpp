#include "vvi/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "vvi/rng.hpp"

namespace vvi {

std::string_view to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Symmetric: return "Symmetric";
    case SymmetryClass::SkewSymmetric: return "SkewSymmetric";
    case SymmetryClass::Neither: return "Neither";
  }
  return "?";
}

namespace {

constexpr double kHypothesisTol = 1e-9;

Vec sample_point(const VviProblem& problem, Rng& rng, SamplingBox box) {
  Vec z(problem.n());
  for (double& v : z) v = rng.uniform(box.lower, box.upper);
  return problem.constraint_set().project(z);
}

void check_box(SamplingBox box) {
  if (!(box.lower < box.upper) || !std::isfinite(box.lower) || !std::isfinite(box.upper))
    throw std::invalid_argument("sampling box needs finite lower < upper");
}

}  // namespace

MonotoneReport check_monotone(const VviProblem& problem, std::size_t samples, std::uint64_t seed, SamplingBox box) {
  if (samples == 0) throw std::invalid_argument("check_monotone: samples must be >= 1");
  check_box(box);
  Rng rng(seed);
  MonotoneReport rep;
  rep.min_pairing = std::numeric_limits<double>::infinity();
  rep.min_eig = std::numeric_limits<double>::infinity();
  const auto& fields = problem.fields();

  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = sample_point(problem, rng, box);
    const Vec y = sample_point(problem, rng, box);
    Vec d(x.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = y[i] - x[i];
    for (std::size_t l = 0; l < fields.size(); ++l) {
      const Vec fx = fields[l](x), fy = fields[l](y);
      double p = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) p += (fy[i] - fx[i]) * d[i];
      if (p < rep.min_pairing) {
        rep.min_pairing = p;
        if (p < -kHypothesisTol) rep.witness = MonotoneWitness{l, x, y, p};
      }
    }
  }
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = sample_point(problem, rng, box);
    for (const auto& f : fields) {
      const Matrix j = f.jacobian(x);
      const Matrix sym = 0.5 * (j + j.transposed());
      rep.min_eig = std::min(rep.min_eig, symmetric_eigenvalues(sym).front());
    }
  }
  rep.monotone_certified = rep.min_pairing >= -kHypothesisTol && rep.min_eig >= -kHypothesisTol;
  return rep;
}

SymmetryReport classify_symmetry(const VviProblem& problem, std::size_t samples, std::uint64_t seed,
                                 SamplingBox box) {
  if (samples == 0) throw std::invalid_argument("classify_symmetry: samples must be >= 1");
  check_box(box);
  Rng rng(seed);
  SymmetryReport rep;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = sample_point(problem, rng, box);
    for (const auto& f : problem.fields()) {
      const Matrix j = f.jacobian(x);
      const Matrix jt = j.transposed();
      rep.max_sym_defect = std::max(rep.max_sym_defect, max_abs(j - jt));
      rep.max_skew_defect = std::max(rep.max_skew_defect, max_abs(j + jt));
    }
  }
  const bool sym = rep.max_sym_defect <= kHypothesisTol;
  const bool skew = rep.max_skew_defect <= kHypothesisTol;
  rep.degenerate = sym && skew;
  if (sym) rep.symmetry_class = SymmetryClass::Symmetric;
  else if (skew) rep.symmetry_class = SymmetryClass::SkewSymmetric;
  else rep.symmetry_class = SymmetryClass::Neither;
  return rep;
}

namespace {

using Predicate = std::function<bool(std::span<const double> pairings, double scale)>;

std::optional<Vec> falsify(const VviProblem& problem, std::span<const double> x, std::size_t probes,
                           std::uint64_t seed, std::span<const Vec> cloud_points, const Predicate& is_witness) {
  const ConvexSet& k = problem.constraint_set();
  if (x.size() != problem.n()) throw std::invalid_argument("falsifier: point has wrong dimension");
  if (!k.contains(x, 1e-6)) throw std::invalid_argument("falsifier: point is not in K");

  std::vector<Vec> fx;
  for (const auto& f : problem.fields()) fx.push_back(f(x));

  static constexpr std::array<double, 3> kScales{1e-2, 1.0, 1e2};
  Rng rng(seed);
  Vec z(x.size());
  Vec pairings(fx.size());
  for (std::size_t p = 0; p < probes; ++p) {
    const bool toward_cloud = !cloud_points.empty() && p % 2 == 1;
    if (toward_cloud) {
      const Vec& c = cloud_points[rng.below(cloud_points.size())];
      if (c.size() != x.size()) throw std::invalid_argument("falsifier: cloud point has wrong dimension");
      const double t = rng.uniform() < 0.5 ? 1.0 : rng.uniform();
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + t * (c[i] - x[i]);
    } else {
      Vec d(x.size());
      double nd = 0.0;
      while (nd == 0.0) {
        for (double& v : d) v = rng.normal();
        nd = norm(d);
      }
      const double scale = kScales[(cloud_points.empty() ? p : p / 2) % kScales.size()];
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + scale * d[i] / nd;
    }
    Vec y;
    try {
      y = k.project(z);
    } catch (const ProjectionError&) {
      continue;
    }
    const double step = distance(y, x);
    if (step == 0.0) continue;
    for (std::size_t l = 0; l < fx.size(); ++l) {
      double s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) s += fx[l][i] * (y[i] - x[i]);
      pairings[l] = s;
    }
    if (is_witness(pairings, std::max(1.0, step))) return y;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Vec> falsify_weak_pareto(const VviProblem& problem, std::span<const double> x, std::size_t probes,
                                       std::uint64_t seed, std::span<const Vec> cloud_points) {
  return falsify(problem, x, probes, seed, cloud_points, [](std::span<const double> pr, double scale) {
    return std::all_of(pr.begin(), pr.end(), [&](double v) { return v < -1e-9 * scale; });
  });
}

std::optional<Vec> falsify_pareto(const VviProblem& problem, std::span<const double> x, std::size_t probes,
                                  std::uint64_t seed, std::span<const Vec> cloud_points) {
  return falsify(problem, x, probes, seed, cloud_points, [](std::span<const double> pr, double scale) {
    const bool none_positive = std::all_of(pr.begin(), pr.end(), [&](double v) { return v <= 1e-12 * scale; });
    const bool some_negative = std::any_of(pr.begin(), pr.end(), [&](double v) { return v < -1e-9 * scale; });
    return none_positive && some_negative;
  });
}

}  // namespace vvi
