#include "vvi/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vvi {

std::string_view to_string(SampleSet s) { return s == SampleSet::Weak ? "weak" : "proper"; }

std::string_view to_string(Boundedness b) {
  switch (b) {
    case Boundedness::Bounded: return "Bounded";
    case Boundedness::Unbounded: return "Unbounded";
    case Boundedness::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view to_string(AuditTarget t) {
  switch (t) {
    case AuditTarget::Weak: return "weak";
    case AuditTarget::Proper: return "proper";
    case AuditTarget::Pareto: return "pareto";
  }
  return "?";
}

std::string_view to_string(Consistency c) {
  switch (c) {
    case Consistency::Consistent: return "Consistent";
    case Consistency::Violation: return "Violation";
    case Consistency::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  void grow(std::size_t n) {
    const std::size_t old = parent_.size();
    parent_.resize(n);
    size_.resize(n, 1);
    for (std::size_t i = old; i < n; ++i) parent_[i] = i;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

const Vec& point_of(const SolutionCloud& cloud, std::size_t i) { return cloud.samples[i].outcome.point; }

bool in_class(const SolutionSample& s, SampleSet which) {
  return s.converged() && (which == SampleSet::Weak || s.xi.interior());
}

bool lattice_adjacent(const std::vector<long>& a, const std::vector<long>& b) {
  int plus = 0, minus = 0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const long d = b[l] - a[l];
    if (d == 1) ++plus;
    else if (d == -1) ++minus;
    else if (d != 0) return false;
  }
  return plus == 1 && minus == 1;
}

Vec midpoint(const Vec& a, const Vec& b) {
  Vec m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
  return m;
}

}  // namespace

std::vector<std::size_t> select_samples(const SolutionCloud& cloud, SampleSet which) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cloud.samples.size(); ++i)
    if (in_class(cloud.samples[i], which)) out.push_back(i);
  return out;
}

double default_linking_radius(const SolutionCloud& cloud, SampleSet which) {
  std::vector<const Vec*> distinct;
  for (std::size_t i : select_samples(cloud, which)) {
    const Vec& p = point_of(cloud, i);
    const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                  [&](const Vec* q) { return distance(*q, p) <= 1e-9; });
    if (!seen) distinct.push_back(&p);
  }
  if (distinct.size() < 2) return 1.0;
  std::vector<double> nn(distinct.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < distinct.size(); ++i)
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      const double d = distance(*distinct[i], *distinct[j]);
      nn[i] = std::min(nn[i], d);
      nn[j] = std::min(nn[j], d);
    }
  const std::size_t mid = nn.size() / 2;
  std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(mid), nn.end());
  double median = nn[mid];
  if (nn.size() % 2 == 0) {
    const double lower = *std::max_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return 5.0 * median;
}

ComponentAnalysis build_components(const SolutionCloud& cloud, SampleSet which, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("build_components: linking radius must be positive");
  ComponentAnalysis out;
  out.delta = delta;
  const auto sel = select_samples(cloud, which);
  if (sel.empty()) return out;
  out.empty_set = false;

  UnionFind uf(sel.size());
  for (std::size_t a = 0; a < sel.size(); ++a)
    for (std::size_t b = a + 1; b < sel.size(); ++b)
      if (distance(point_of(cloud, sel[a]), point_of(cloud, sel[b])) <= delta) uf.unite(a, b);

  std::vector<std::size_t> comp_of_root(sel.size(), SIZE_MAX);
  for (std::size_t a = 0; a < sel.size(); ++a) {
    const std::size_t r = uf.find(a);
    if (comp_of_root[r] == SIZE_MAX) {
      comp_of_root[r] = out.components.size();
      ComponentReport rep;
      rep.id = out.components.size();
      out.components.push_back(std::move(rep));
    }
    out.components[comp_of_root[r]].members.push_back(sel[a]);
  }
  for (auto& c : out.components) {
    for (std::size_t a = 0; a < c.members.size(); ++a) {
      const Vec& pa = point_of(cloud, c.members[a]);
      c.max_norm = std::max(c.max_norm, norm(pa));
      for (std::size_t b = a + 1; b < c.members.size(); ++b)
        c.diameter = std::max(c.diameter, distance(pa, point_of(cloud, c.members[b])));
    }
  }
  return out;
}

namespace {

class Bridger {
 public:
  Bridger(const VviProblem& problem, double delta, const BridgeOptions& opts)
      : problem_(problem), delta_(delta), opts_(opts) {}

  // Appends intermediate samples strictly between a and b on success.
  bool chain(const SimplexWeight& xa, const Vec& pa, const SimplexWeight& xb, const Vec& pb, std::size_t depth,
             std::vector<SolutionSample>& out) const {
    if (distance(pa, pb) <= delta_) return true;
    if (depth >= opts_.max_depth) return false;
    SimplexWeight xm(midpoint(xa.weights(), xb.weights()));
    const VectorField f = scalarize(problem_, xm);
    const ConvexSet& k = problem_.constraint_set();
    SolveOutcome o;
    try {
      o = solve_vi(f, k, pa, opts_.solver);
      if (!o.converged()) o = solve_vi(f, k, pb, opts_.solver);
    } catch (const ProjectionError&) {
      return false;
    }
    if (!o.converged()) return false;
    const Vec pm = o.point;
    if (!chain(xa, pa, xm, pm, depth + 1, out)) return false;
    out.push_back({xm, std::move(o), 0, SampleOrigin::Bridge});
    return chain(xm, pm, xb, pb, depth + 1, out);
  }

 private:
  const VviProblem& problem_;
  double delta_;
  const BridgeOptions& opts_;
};

}  // namespace

std::size_t bridge_lattice_gaps(const VviProblem& problem, SolutionCloud& cloud, SampleSet which, double delta,
                                const BridgeOptions& opts) {
  if (!(delta > 0.0)) throw std::invalid_argument("bridge_lattice_gaps: linking radius must be positive");
  if (cloud.resolution == 0 || cloud.m < 2) return 0;
  std::vector<std::size_t> sel = select_samples(cloud, which);
  UnionFind uf(cloud.samples.size());
  for (std::size_t a = 0; a < sel.size(); ++a)
    for (std::size_t b = a + 1; b < sel.size(); ++b)
      if (distance(point_of(cloud, sel[a]), point_of(cloud, sel[b])) <= delta) uf.unite(sel[a], sel[b]);

  std::vector<std::size_t> grid;
  std::vector<std::vector<long>> coords;
  for (std::size_t i : sel) {
    if (cloud.samples[i].origin != SampleOrigin::Grid) continue;
    auto c = lattice_coordinates(cloud.samples[i].xi, cloud.resolution);
    if (!c) continue;
    grid.push_back(i);
    coords.push_back(std::move(*c));
  }

  const Bridger bridger(problem, delta, opts);
  std::size_t added = 0;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      if (!lattice_adjacent(coords[a], coords[b])) continue;
      const std::size_t ia = grid[a], ib = grid[b];
      if (uf.find(ia) == uf.find(ib)) continue;
      std::vector<SolutionSample> links;
      const SolutionSample sa = cloud.samples[ia];
      const SolutionSample sb = cloud.samples[ib];
      if (!bridger.chain(sa.xi, sa.outcome.point, sb.xi, sb.outcome.point, 0, links)) continue;

      std::size_t prev = ia;
      for (auto& s : links) {
        const std::size_t idx = cloud.samples.size();
        cloud.samples.push_back(std::move(s));
        uf.grow(cloud.samples.size());
        uf.unite(prev, idx);
        for (std::size_t j : sel)
          if (distance(point_of(cloud, j), point_of(cloud, idx)) <= delta) uf.unite(j, idx);
        sel.push_back(idx);
        prev = idx;
        ++added;
      }
      uf.unite(prev, ib);
    }
  }
  return added;
}

ComponentReport boundedness_probe(const VviProblem& problem, const ComponentReport& component,
                                  const SolutionCloud& cloud, const ProbeOptions& opts) {
  if (opts.radii.size() < 2) throw std::invalid_argument("boundedness_probe: need at least two radii");
  for (std::size_t i = 0; i < opts.radii.size(); ++i) {
    if (!(opts.radii[i] > 0.0)) throw std::invalid_argument("boundedness_probe: radii must be positive");
    if (i > 0 && !(opts.radii[i] > opts.radii[i - 1]))
      throw std::invalid_argument("boundedness_probe: radii must be strictly increasing");
  }
  if (component.members.empty()) throw std::invalid_argument("boundedness_probe: empty component");

  ComponentReport rep = component;
  rep.probe_trace.clear();
  const ConvexSet& k = problem.constraint_set();

  // Largest-norm member, preferring grid samples.
  std::size_t star = SIZE_MAX;
  for (int pass = 0; pass < 2 && star == SIZE_MAX; ++pass)
    for (std::size_t i : component.members) {
      if (pass == 0 && cloud.samples[i].origin != SampleOrigin::Grid) continue;
      if (star == SIZE_MAX || norm(point_of(cloud, i)) > norm(point_of(cloud, star))) star = i;
    }
  const SimplexWeight xi_star = cloud.samples[star].xi;
  const Vec x_star = point_of(cloud, star);

  // Lattice neighbours of ξ* that carry no member of this component.
  std::vector<Vec> frontier;
  if (cloud.resolution > 0 && cloud.m >= 2) {
    if (auto c = lattice_coordinates(xi_star, cloud.resolution)) {
      std::vector<std::vector<long>> member_coords;
      for (std::size_t i : component.members)
        if (auto mc = lattice_coordinates(cloud.samples[i].xi, cloud.resolution)) member_coords.push_back(*mc);
      for (std::size_t from = 0; from < cloud.m; ++from) {
        if ((*c)[from] == 0) continue;
        for (std::size_t to = 0; to < cloud.m; ++to) {
          if (to == from) continue;
          auto nb = *c;
          --nb[from];
          ++nb[to];
          if (std::find(member_coords.begin(), member_coords.end(), nb) != member_coords.end()) continue;
          Vec w(cloud.m);
          for (std::size_t l = 0; l < cloud.m; ++l)
            w[l] = static_cast<double>(nb[l]) / static_cast<double>(cloud.resolution);
          frontier.push_back(std::move(w));
        }
      }
    }
  }

  // Refined paths toward each frontier weight; keep the one reaching the
  // largest converged norm.
  bool growth = false;
  SimplexWeight xi_radius = xi_star;
  Vec warm = x_star;
  double best_norm = -1.0;
  for (const Vec& target : frontier) {
    std::vector<double> norms{norm(x_star)};
    Vec prev = x_star;
    Vec last_w = xi_star.weights();
    bool path_growth = true;
    for (std::size_t level = 1; level <= opts.refine_levels; ++level) {
      const double t = 1.0 - std::ldexp(1.0, -static_cast<int>(level));
      Vec w(cloud.m);
      for (std::size_t l = 0; l < cloud.m; ++l) w[l] = xi_star[l] + t * (target[l] - xi_star[l]);
      last_w = w;
      const SimplexWeight xi(std::move(w));
      SolveOutcome o;
      try {
        o = solve_vi(scalarize(problem, xi), k, prev, opts.solver);
      } catch (const ProjectionError&) {
        o.status = SolveStatus::MaxIterations;
        o.point = prev;
      }
      rep.probe_trace.push_back({std::nullopt, norm(o.point), xi.weights(), o.status});
      if (!o.converged()) break;
      const double nm = norm(o.point);
      if (!(nm > norms.back())) path_growth = false;
      norms.push_back(nm);
      prev = o.point;
    }
    const bool grows = path_growth && norms.size() >= 3;
    if (norms.back() > best_norm) {
      best_norm = norms.back();
      growth = grows;
      xi_radius = SimplexWeight(last_w);
      warm = prev;
    }
  }

  const VectorField f = scalarize(problem, xi_radius);
  std::vector<ProbeEntry> radius_entries;
  for (double r : opts.radii) {
    const ConvexSet kr = intersect_ball(k, r);
    SolveOutcome o;
    try {
      o = solve_vi(f, kr, kr.project(warm), opts.solver);
    } catch (const ProjectionError&) {
      o.status = SolveStatus::MaxIterations;
      o.point = kr.project(warm);
    }
    ProbeEntry e{r, norm(o.point), xi_radius.weights(), o.status};
    rep.probe_trace.push_back(e);
    radius_entries.push_back(e);
    warm = o.point;
  }

  const ProbeEntry& last = radius_entries[radius_entries.size() - 1];
  const ProbeEntry& prev = radius_entries[radius_entries.size() - 2];
  const bool both_converged = last.status == SolveStatus::Converged && prev.status == SolveStatus::Converged;
  const bool hits = both_converged && last.norm >= 0.99 * *last.radius && prev.norm >= 0.99 * *prev.radius;
  bool radius_growth = true;
  for (std::size_t i = 1; i < radius_entries.size(); ++i)
    if (!(radius_entries[i].norm > radius_entries[i - 1].norm)) radius_growth = false;

  if (hits && (growth || (frontier.empty() && radius_growth))) {
    rep.boundedness = Boundedness::Unbounded;
  } else if (both_converged && std::abs(last.norm - prev.norm) < 1e-6 && last.norm < 0.99 * *last.radius) {
    rep.boundedness = Boundedness::Bounded;
  } else {
    rep.boundedness = Boundedness::Inconclusive;
  }
  return rep;
}

TheoremVerdict theorem_audit(std::span<const ComponentReport> reports, AuditTarget which, bool polyhedral,
                             bool monotone_certified, double domain_coverage) {
  TheoremVerdict v;
  v.component_count = reports.size();
  v.empty_set = reports.empty();
  v.domain_coverage = domain_coverage;
  if (v.empty_set) {
    v.consistency = Consistency::Consistent;
    v.notes.push_back("no converged sample in this class: the set is empty at this resolution, and the "
                      "connectedness results only concern nonempty sets");
    return v;
  }
  auto count = [&](Boundedness b) {
    return static_cast<std::size_t>(
        std::count_if(reports.begin(), reports.end(), [&](const ComponentReport& r) { return r.boundedness == b; }));
  };
  const std::size_t bounded = count(Boundedness::Bounded);
  const std::size_t unbounded = count(Boundedness::Unbounded);
  v.all_components_unbounded = unbounded == reports.size();
  v.bounded_and_nonempty = bounded == reports.size();
  v.connected = reports.size() == 1;

  if (!monotone_certified)
    v.notes.push_back("monotonicity not certified: the theorems' hypotheses are unverified, checks are "
                      "observational");

  if (which == AuditTarget::Pareto && !polyhedral) {
    v.consistency = Consistency::Inconclusive;
    v.notes.push_back("K is not polyhedral: the Pareto set is only bracketed between the proper and weak sets; "
                      "reporting observations only");
    return v;
  }
  if (which == AuditTarget::Pareto) v.notes.push_back("K is polyhedral: Pareto set audited as the proper set");

  std::vector<std::string> failures;
  bool inconclusive = false;
  if (reports.size() >= 2) {
    for (const auto& r : reports)
      if (r.boundedness == Boundedness::Bounded)
        failures.push_back("set is disconnected but component " + std::to_string(r.id) + " is Bounded");
    if (failures.empty() && !v.all_components_unbounded) {
      inconclusive = true;
      v.notes.push_back("disconnected set with components of undetermined boundedness");
    }
  }
  if (which == AuditTarget::Weak && v.bounded_and_nonempty && reports.size() == 1 && domain_coverage < 1.0)
    failures.push_back("weak set is bounded and nonempty but only " + std::to_string(domain_coverage * 100.0) +
                       "% of grid weights have a solution");
  if (reports.size() == 1 && !v.bounded_and_nonempty && count(Boundedness::Inconclusive) > 0)
    v.notes.push_back("single component with undetermined boundedness");

  if (!failures.empty()) {
    v.notes.insert(v.notes.end(), failures.begin(), failures.end());
    if (monotone_certified) {
      v.consistency = Consistency::Violation;
      v.notes.push_back("probable numerical artifact: refine the grid, lower delta, or extend the probe radii");
    } else {
      v.consistency = Consistency::Inconclusive;
    }
  } else {
    v.consistency = inconclusive ? Consistency::Inconclusive : Consistency::Consistent;
  }
  return v;
}

TheoremVerdict theorem_audit(const ComponentAnalysis& analysis, AuditTarget which, bool polyhedral,
                             bool monotone_certified, double domain_coverage) {
  return theorem_audit(std::span<const ComponentReport>(analysis.components), which, polyhedral, monotone_certified,
                       domain_coverage);
}

}  // namespace vvi
