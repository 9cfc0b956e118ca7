#include "vvi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vvi/rng.hpp"

namespace vvi {

std::vector<SimplexWeight> simplex_grid(std::size_t m, std::size_t resolution, double interior_margin) {
  if (m == 0) throw std::invalid_argument("simplex_grid: m must be >= 1");
  if (resolution == 0) throw std::invalid_argument("simplex_grid: resolution must be >= 1");
  if (!(interior_margin >= 0.0 && interior_margin < 1.0 / static_cast<double>(m)))
    throw std::invalid_argument("simplex_grid: interior margin must lie in [0, 1/m)");

  std::vector<SimplexWeight> out;
  std::vector<std::size_t> k(m, 0);
  const double res = static_cast<double>(resolution);
  // Enumerate compositions k_1 + ... + k_m = resolution, k_1 slowest.
  auto emit = [&] {
    Vec w(m);
    for (std::size_t l = 0; l < m; ++l) w[l] = static_cast<double>(k[l]) / res;
    if (interior_margin > 0.0 && *std::min_element(w.begin(), w.end()) < interior_margin) return;
    out.emplace_back(std::move(w));
  };
  auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos + 1 == m) {
      k[pos] = remaining;
      emit();
      return;
    }
    for (std::size_t v = 0; v <= remaining; ++v) {
      k[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, resolution);
  return out;
}

std::size_t infer_resolution(std::span<const SimplexWeight> weights) {
  if (weights.empty()) return 0;
  if (weights.front().size() == 1) return 1;
  std::vector<double> values;
  for (const auto& w : weights) values.insert(values.end(), w.weights().begin(), w.weights().end());
  std::sort(values.begin(), values.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    if (d > 1e-12) gap = std::min(gap, d);
  }
  if (!std::isfinite(gap)) return 0;
  const double r = std::round(1.0 / gap);
  if (r < 1.0 || r > 1e7) return 0;
  const auto res = static_cast<std::size_t>(r);
  for (const auto& w : weights)
    if (!lattice_coordinates(w, res)) return 0;
  return res;
}

std::optional<std::vector<long>> lattice_coordinates(const SimplexWeight& xi, std::size_t resolution) {
  if (resolution == 0) return std::nullopt;
  std::vector<long> k(xi.size());
  long total = 0;
  for (std::size_t l = 0; l < xi.size(); ++l) {
    const double v = xi[l] * static_cast<double>(resolution);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-7) return std::nullopt;
    k[l] = static_cast<long>(r);
    total += k[l];
  }
  if (total != static_cast<long>(resolution)) return std::nullopt;
  return k;
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

std::vector<SolutionSample> solve_at(const VviProblem& problem, const SimplexWeight& xi, std::size_t grid_index,
                                     const SweepOptions& opts) {
  const ConvexSet& k = problem.constraint_set();
  const std::size_t n = problem.n();
  const VectorField f = scalarize(problem, xi);
  const Vec x_default = k.project(Vec(n, 0.0));
  Rng rng(opts.seed, grid_index);

  std::vector<SolutionSample> kept;
  std::optional<SolutionSample> first_failure;
  for (std::size_t s = 0; s < std::max<std::size_t>(opts.starts, 1); ++s) {
    Vec x0 = x_default;
    if (s > 0) {
      for (double& v : x0) v += rng.uniform(-opts.start_radius, opts.start_radius);
      x0 = k.project(x0);
    }
    SolveOutcome outcome;
    try {
      outcome = solve_vi(f, k, x0, opts.solver);
    } catch (const ProjectionError&) {
      outcome.status = SolveStatus::MaxIterations;
      outcome.point = x0;
      outcome.residual = std::numeric_limits<double>::infinity();
    }
    if (outcome.converged()) {
      const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const SolutionSample& other) {
        return distance(other.outcome.point, outcome.point) <= opts.dedup_tol;
      });
      if (!duplicate) kept.push_back({xi, std::move(outcome), s, SampleOrigin::Grid});
    } else if (!first_failure) {
      first_failure = SolutionSample{xi, std::move(outcome), s, SampleOrigin::Grid};
    }
  }
  if (kept.empty() && first_failure) kept.push_back(std::move(*first_failure));
  return kept;
}

}  // namespace

SolutionCloud sweep(const VviProblem& problem, std::span<const SimplexWeight> grid, const SweepOptions& opts) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  opts.solver.validate();
  for (const auto& w : grid)
    if (w.size() != problem.m()) throw std::invalid_argument("sweep: grid weight has the wrong length");

  std::vector<std::vector<SolutionSample>> per_weight(grid.size());
  const unsigned threads = std::min<unsigned>(resolve_thread_count(opts.threads),
                                              static_cast<unsigned>(grid.size()));
  if (threads <= 1) {
    for (std::size_t g = 0; g < grid.size(); ++g) per_weight[g] = solve_at(problem, grid[g], g, opts);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        (void)t;
        for (std::size_t g = next++; g < grid.size() && !failed; g = next++) {
          try {
            per_weight[g] = solve_at(problem, grid[g], g, opts);
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  SolutionCloud cloud;
  cloud.problem_name = problem.name();
  cloud.m = problem.m();
  cloud.n = problem.n();
  cloud.resolution = infer_resolution(grid);
  for (auto& v : per_weight)
    for (auto& s : v) cloud.samples.push_back(std::move(s));
  return cloud;
}

SolutionCloud sweep(const VviProblem& problem, const GridSpec& spec, const SweepOptions& opts) {
  if (spec.m != problem.m()) throw std::invalid_argument("sweep: grid spec m differs from the problem");
  const auto grid = simplex_grid(spec.m, spec.resolution, spec.interior_margin);
  if (grid.empty()) throw std::invalid_argument("sweep: the grid is empty for this margin");
  SolutionCloud cloud = sweep(problem, grid, opts);
  cloud.resolution = spec.resolution;
  cloud.interior_margin = spec.interior_margin;
  return cloud;
}

SampleClassification classify_samples(const SolutionCloud& cloud, bool polyhedral) {
  SampleClassification c;
  for (std::size_t i = 0; i < cloud.samples.size(); ++i) {
    const auto& s = cloud.samples[i];
    if (!s.converged()) continue;
    c.weak.push_back(i);
    if (s.xi.interior()) c.proper.push_back(i);
  }
  c.pareto_status = polyhedral ? ParetoStatus::Exact : ParetoStatus::BracketedOnly;
  return c;
}

double domain_coverage(const SolutionCloud& cloud, bool interior_only) {
  std::set<Vec> all, covered;
  for (const auto& s : cloud.samples) {
    if (s.origin != SampleOrigin::Grid) continue;
    if (interior_only && !s.xi.interior()) continue;
    all.insert(s.xi.weights());
    if (s.converged()) covered.insert(s.xi.weights());
  }
  if (all.empty()) return 0.0;
  return static_cast<double>(covered.size()) / static_cast<double>(all.size());
}

namespace {

void put_number(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (s.empty() || end != begin + s.size())
    throw std::runtime_error("cloud CSV line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void write_cloud_csv(const SolutionCloud& cloud, std::ostream& out) {
  for (std::size_t l = 0; l < cloud.m; ++l) out << "xi_" << l + 1 << ',';
  out << "interior,status,iterations,residual";
  for (std::size_t i = 0; i < cloud.n; ++i) out << ",x_" << i + 1;
  out << '\n';
  for (const auto& s : cloud.samples) {
    if (s.origin != SampleOrigin::Grid) continue;
    for (double w : s.xi.weights()) {
      put_number(out, w);
      out << ',';
    }
    out << (s.xi.interior() ? 1 : 0) << ',' << to_string(s.outcome.status) << ',' << s.outcome.iterations << ',';
    put_number(out, s.outcome.residual);
    for (double v : s.outcome.point) {
      out << ',';
      put_number(out, v);
    }
    out << '\n';
  }
}

std::string cloud_csv(const SolutionCloud& cloud) {
  std::ostringstream os;
  write_cloud_csv(cloud, os);
  return os.str();
}

SolutionCloud read_cloud_csv(std::istream& in, std::string problem_name) {
  SolutionCloud cloud;
  cloud.problem_name = std::move(problem_name);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("cloud CSV is empty");
  const auto header = split_csv(line);
  std::size_t m = 0;
  while (m < header.size() && header[m] == "xi_" + std::to_string(m + 1)) ++m;
  if (m == 0 || header.size() < m + 4 || header[m] != "interior" || header[m + 1] != "status" ||
      header[m + 2] != "iterations" || header[m + 3] != "residual")
    throw std::runtime_error("cloud CSV header does not match xi_*,interior,status,iterations,residual,x_*");
  const std::size_t n = header.size() - m - 4;
  for (std::size_t i = 0; i < n; ++i)
    if (header[m + 4 + i] != "x_" + std::to_string(i + 1))
      throw std::runtime_error("cloud CSV header: expected x_" + std::to_string(i + 1));
  if (n == 0) throw std::runtime_error("cloud CSV has no x_ columns");
  cloud.m = m;
  cloud.n = n;

  std::size_t line_no = 1;
  std::vector<SimplexWeight> weights;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw std::runtime_error("cloud CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells");
    Vec w(m);
    for (std::size_t l = 0; l < m; ++l) w[l] = to_double(cells[l], line_no);
    SolveOutcome o;
    const auto status = parse_status(cells[m + 1]);
    if (!status) throw std::runtime_error("cloud CSV line " + std::to_string(line_no) + ": bad status");
    o.status = *status;
    o.iterations = static_cast<std::size_t>(to_double(cells[m + 2], line_no));
    o.residual = to_double(cells[m + 3], line_no);
    o.point.resize(n);
    for (std::size_t i = 0; i < n; ++i) o.point[i] = to_double(cells[m + 4 + i], line_no);
    try {
      SimplexWeight xi(std::move(w));
      weights.push_back(xi);
      cloud.samples.push_back({std::move(xi), std::move(o), 0, SampleOrigin::Grid});
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("cloud CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  cloud.resolution = infer_resolution(weights);
  double margin = 1.0;
  for (const auto& w : weights) margin = std::min(margin, *std::min_element(w.weights().begin(), w.weights().end()));
  cloud.interior_margin = weights.empty() ? 0.0 : margin;
  return cloud;
}

}  // namespace vvi
