// vvi: command-line front end for sweeps, component audits and checks.

#include <cstdio>
#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vvi/analysis.hpp"
#include "vvi/catalog.hpp"
#include "vvi/io.hpp"
#include "vvi/sweep.hpp"
#include "vvi/topology.hpp"
#include "vvi/vi.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNotConverged = 2;
constexpr int kViolation = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<unsigned> threads;
  double tol = 1e-9;
  std::size_t max_iter = 200000;
  std::uint64_t seed = 0;
  std::string out;
};

vvi::SolverOptions solver_options(const Globals& g) {
  vvi::SolverOptions s;
  s.tol = g.tol;
  s.max_iter = g.max_iter;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

unsigned thread_count(const Globals& g) {
  if (g.threads) return vvi::resolve_thread_count(*g.threads);
  if (const char* env = std::getenv("VVI_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw UsageError("VVI_THREADS must be a nonnegative integer");
    return vvi::resolve_thread_count(static_cast<unsigned>(v));
  }
  return 1;
}

vvi::VviProblem load_problem(const std::string& ref) {
  try {
    return vvi::resolve_problem(ref);
  } catch (const vvi::SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

vvi::Vec parse_list(const std::string& text, const char* what) {
  vvi::Vec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what);
  return out;
}

// Writes to --out when given, else stdout.
void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f || !(f << text)) throw std::runtime_error("cannot write '" + g.out + "'");
}

int cmd_solve(const Globals& g, const std::string& ref, const std::string& xi_text, const std::string& x0_text) {
  const auto problem = load_problem(ref);
  vvi::Vec w = parse_list(xi_text, "--xi");
  if (w.size() != problem.m())
    throw UsageError("--xi needs " + std::to_string(problem.m()) + " weights, got " + std::to_string(w.size()));
  std::optional<vvi::SimplexWeight> xi;
  try {
    xi.emplace(w);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--xi is not a simplex weight: ") + e.what());
  }
  std::optional<vvi::Vec> x0;
  if (!x0_text.empty()) {
    x0 = parse_list(x0_text, "--x0");
    if (x0->size() != problem.n()) throw UsageError("--x0 needs " + std::to_string(problem.n()) + " entries");
  }
  const auto outcome = vvi::solve_vi(vvi::scalarize(problem, *xi), problem.constraint_set(), x0, solver_options(g));
  vvi::Json j = vvi::outcome_to_json(outcome);
  j["problem"] = problem.name();
  j["xi"] = xi->weights();
  emit(g, vvi::dump(j));
  return outcome.converged() ? kOk : kNotConverged;
}

int cmd_sweep(const Globals& g, const std::string& ref, std::size_t resolution, double margin, std::size_t starts) {
  const auto problem = load_problem(ref);
  if (resolution == 0) throw UsageError("--resolution must be >= 1");
  if (starts == 0) throw UsageError("--starts must be >= 1");
  if (!(margin >= 0.0) || margin * static_cast<double>(problem.m()) >= 1.0)
    throw UsageError("--margin must lie in [0, 1/m)");
  vvi::SweepOptions opts;
  opts.starts = starts;
  opts.seed = g.seed;
  opts.solver = solver_options(g);
  opts.threads = thread_count(g);
  const auto cloud = vvi::sweep(problem, vvi::GridSpec{problem.m(), resolution, margin}, opts);
  emit(g, vvi::cloud_csv(cloud));
  std::size_t failed = 0;
  for (const auto& s : cloud.samples) failed += s.converged() ? 0 : 1;
  std::fprintf(stderr, "%zu samples, %zu not converged, domain coverage %.6g\n", cloud.samples.size(), failed,
               vvi::domain_coverage(cloud));
  return kOk;
}

struct ComponentsArgs {
  std::string cloud_path;
  std::string set_class = "weak";
  std::optional<double> delta;
  std::string problem_ref;
  std::string radii;
  bool no_probe = false;
  bool no_bridge = false;
  bool assume_monotone = false;
};

int cmd_components(const Globals& g, const ComponentsArgs& a) {
  vvi::SampleSet which = vvi::SampleSet::Weak;
  vvi::AuditTarget target = vvi::AuditTarget::Weak;
  if (a.set_class == "proper") {
    which = vvi::SampleSet::Proper;
    target = vvi::AuditTarget::Proper;
  } else if (a.set_class == "pareto") {
    which = vvi::SampleSet::Proper;
    target = vvi::AuditTarget::Pareto;
  } else if (a.set_class != "weak") {
    throw UsageError("--class must be weak, proper or pareto");
  }
  if (a.delta && !(*a.delta > 0.0)) throw UsageError("--delta must be positive");

  std::ifstream in(a.cloud_path);
  if (!in) throw UsageError("cannot open cloud '" + a.cloud_path + "'");
  auto cloud = vvi::read_cloud_csv(in, std::filesystem::path(a.cloud_path).stem().string());

  std::optional<vvi::VviProblem> problem;
  if (!a.problem_ref.empty()) {
    problem.emplace(load_problem(a.problem_ref));
    if (problem->n() != cloud.n || problem->m() != cloud.m)
      throw UsageError("problem dimensions do not match the cloud");
    cloud.problem_name = problem->name();
  }
  const auto solver = solver_options(g);
  vvi::ProbeOptions probe_opts;
  probe_opts.solver = solver;
  if (!a.radii.empty()) probe_opts.radii = parse_list(a.radii, "--radii");

  const double delta = a.delta ? *a.delta : vvi::default_linking_radius(cloud, which);
  std::size_t bridged = 0;
  if (problem && !a.no_bridge) {
    vvi::BridgeOptions bo;
    bo.solver = solver;
    bridged = vvi::bridge_lattice_gaps(*problem, cloud, which, delta, bo);
  }
  auto analysis = vvi::build_components(cloud, which, delta);
  if (problem && !a.no_probe) {
    try {
      for (auto& c : analysis.components) c = vvi::boundedness_probe(*problem, c, cloud, probe_opts);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  vvi::ReportContext ctx;
  ctx.problem_name = cloud.problem_name;
  ctx.sample_set = which;
  ctx.target = target;
  ctx.bridge_samples = bridged;
  ctx.polyhedral = problem ? problem->constraint_set().polyhedral() : false;
  ctx.monotone_certified =
      a.assume_monotone || (problem && vvi::check_monotone(*problem, 1000, g.seed).monotone_certified);
  const double coverage = vvi::domain_coverage(cloud, which != vvi::SampleSet::Weak);
  const auto verdict = vvi::theorem_audit(analysis, target, ctx.polyhedral, ctx.monotone_certified, coverage);
  emit(g, vvi::dump(vvi::component_report_to_json(analysis, verdict, ctx)));

  switch (verdict.consistency) {
    case vvi::Consistency::Consistent: return kOk;
    case vvi::Consistency::Violation:
      std::fprintf(stderr, "audit: Violation\n");
      return kViolation;
    case vvi::Consistency::Inconclusive:
      std::fprintf(stderr, "warning: audit Inconclusive\n");
      for (const auto& n : verdict.notes) std::fprintf(stderr, "  %s\n", n.c_str());
      return kOk;
  }
  return kOk;
}

int cmd_check(const Globals& g, const std::string& ref, std::size_t samples) {
  if (samples == 0) throw UsageError("--samples must be >= 1");
  const auto problem = load_problem(ref);
  const auto mono = vvi::check_monotone(problem, samples, g.seed);
  const auto sym = vvi::classify_symmetry(problem, samples, g.seed);
  vvi::Json j = {{"problem", problem.name()},
                 {"monotone", mono.monotone_certified},
                 {"symmetry", std::string(vvi::to_string(sym.symmetry_class))},
                 {"polyhedral", problem.constraint_set().polyhedral()},
                 {"monotonicity", vvi::monotone_to_json(mono)},
                 {"symmetry_defects", vvi::symmetry_to_json(sym)}};
  emit(g, vvi::dump(j));
  return kOk;
}

int cmd_verify(const Globals& g, const std::string& name, std::size_t resolution, std::size_t starts,
               const std::string& plot_path) {
  if (name != "example-q" && name != "example-p") throw UsageError("unknown example '" + name + "'");
  if (resolution == 0) throw UsageError("--resolution must be >= 1");
  const auto problem = vvi::catalog_problem(name);
  vvi::SweepOptions opts;
  opts.starts = starts;
  opts.seed = g.seed;
  opts.solver = solver_options(g);
  opts.threads = thread_count(g);
  const auto cloud = vvi::sweep(problem, vvi::GridSpec{2, resolution, 0.0}, opts);

  std::ostringstream table;
  table << "xi_1,status,error\n";
  double max_err = 0.0;
  bool missing = false;
  char buf[64];
  for (const auto& s : cloud.samples) {
    const double xi1 = s.xi[0];
    const std::optional<vvi::Vec> oracle =
        name == "example-q" ? std::optional<vvi::Vec>(vvi::closed_form_q(xi1)) : vvi::closed_form_p(xi1);
    std::snprintf(buf, sizeof buf, "%.17g", xi1);
    table << buf << ',' << vvi::to_string(s.outcome.status) << ',';
    if (!oracle) {
      table << "excluded\n";
      continue;
    }
    if (!s.converged()) {
      missing = true;
      table << "inf\n";
      continue;
    }
    const double err = vvi::distance(s.outcome.point, *oracle);
    max_err = std::max(max_err, err);
    std::snprintf(buf, sizeof buf, "%.3e", err);
    table << buf << '\n';
  }
  const bool pass = !missing && max_err <= 1e-6;
  std::snprintf(buf, sizeof buf, "%.3e", max_err);
  table << "# max error " << (missing ? "inf" : buf) << " -> " << (pass ? "PASS" : "FAIL") << '\n';
  emit(g, table.str());

  if (!plot_path.empty()) {
    std::ofstream plot(plot_path);
    if (!plot) throw std::runtime_error("cannot write '" + plot_path + "'");
    plot << "x1,x2\n";
    for (const auto& s : cloud.samples) {
      if (!s.converged()) continue;
      std::snprintf(buf, sizeof buf, "%.17g", s.outcome.point[0]);
      plot << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", s.outcome.point[1]);
      plot << buf << '\n';
    }
  }
  return pass ? kOk : kNotConverged;
}

int cmd_export(const Globals& g, const std::string& ref) {
  emit(g, vvi::dump(vvi::problem_to_json(load_problem(ref))));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone vector variational inequalities: sweeps, component audits, hypothesis checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--threads", g.threads, "Worker threads, 0 = auto (falls back to VVI_THREADS)");
  app.add_option("--tol", g.tol, "Natural-residual tolerance")->capture_default_str();
  app.add_option("--max-iter", g.max_iter, "Iteration cap per solve")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for random starts and sampling")->capture_default_str();
  app.add_option("--out", g.out, "Output file (default stdout)");

  std::string ref, xi_text, x0_text;
  auto* solve = app.add_subcommand("solve", "Solve the scalarized VI at one weight");
  solve->add_option("problem", ref, "Catalog name or problem JSON")->required();
  solve->add_option("--xi", xi_text, "Comma-separated simplex weight")->required();
  solve->add_option("--x0", x0_text, "Comma-separated start point");

  std::size_t resolution = 100, starts = 3;
  double margin = 0.0;
  auto* sweep = app.add_subcommand("sweep", "Sweep the simplex lattice and write the cloud CSV");
  sweep->add_option("problem", ref, "Catalog name or problem JSON")->required();
  sweep->add_option("--resolution", resolution, "Lattice steps per unit")->capture_default_str();
  sweep->add_option("--margin", margin, "Keep weights with min xi >= margin")->capture_default_str();
  sweep->add_option("--starts", starts, "Starts per weight")->capture_default_str();

  ComponentsArgs ca;
  auto* comps = app.add_subcommand("components", "Connected components, boundedness and theorem audit");
  comps->add_option("cloud", ca.cloud_path, "Cloud CSV from `sweep`")->required();
  comps->add_option("--class", ca.set_class, "weak | proper | pareto")->capture_default_str();
  comps->add_option("--delta", ca.delta, "Linking radius (default 5 x median nearest-neighbour distance)");
  comps->add_option("--problem", ca.problem_ref, "Problem for lattice bridging and the radius probe");
  comps->add_option("--radii", ca.radii, "Comma-separated probe radii");
  comps->add_flag("--no-probe", ca.no_probe, "Skip the boundedness probe");
  comps->add_flag("--no-bridge", ca.no_bridge, "Skip lattice-gap bridging");
  comps->add_flag("--assume-monotone", ca.assume_monotone, "Treat monotonicity as certified");

  std::size_t samples = 1000;
  auto* check = app.add_subcommand("check", "Sampled monotonicity and symmetry checks");
  check->add_option("problem", ref, "Catalog name or problem JSON")->required();
  check->add_option("--samples", samples, "Sample pairs and points")->capture_default_str();

  std::string example, plot;
  auto* verify = app.add_subcommand("verify-example", "Compare a sweep against the closed-form solutions");
  verify->add_option("name", example, "example-q | example-p")->required();
  verify->add_option("--resolution", resolution, "Lattice steps per unit")->capture_default_str();
  verify->add_option("--starts", starts, "Starts per weight")->capture_default_str();
  verify->add_option("--plot", plot, "Write the x1,x2 plot CSV here");

  auto* exp = app.add_subcommand("export", "Write a problem as JSON");
  exp->add_option("problem", ref, "Catalog name or problem JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(g, ref, xi_text, x0_text);
    if (*sweep) return cmd_sweep(g, ref, resolution, margin, starts);
    if (*comps) return cmd_components(g, ca);
    if (*check) return cmd_check(g, ref, samples);
    if (*verify) return cmd_verify(g, example, resolution, starts, plot);
    if (*exp) return cmd_export(g, ref);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const vvi::SchemaError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
