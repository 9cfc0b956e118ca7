#include "vvi/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vvi/catalog.hpp"

namespace vvi {

namespace {

std::string at(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(at(path, key), "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw SchemaError(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

Vec vector(const Json& j, std::size_t n, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  if (j.size() != n) throw SchemaError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = number(j[i], idx(path, i));
  return v;
}

Vec bounds(const Json& j, std::size_t n, double missing, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  if (j.size() != n) throw SchemaError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = j[i].is_null() ? missing : number(j[i], idx(path, i));
  return v;
}

Matrix matrix(const Json& j, std::size_t cols, const std::string& path, std::optional<std::size_t> rows = {}) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of rows");
  if (rows && j.size() != *rows)
    throw SchemaError(path, "expected " + std::to_string(*rows) + " rows, got " + std::to_string(j.size()));
  Matrix a(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = vector(j[r], cols, idx(path, r));
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = row[c];
  }
  return a;
}

Json vec_json(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

Json bound_json(const Vec& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(std::isinf(x) ? Json(nullptr) : Json(x));
  return out;
}

Json matrix_json(const Matrix& a) {
  Json out = Json::array();
  for (std::size_t r = 0; r < a.rows(); ++r) out.push_back(vec_json(a.row(r)));
  return out;
}

std::string type_of(const Json& j, const std::string& path) {
  const Json& t = require(j, "type", path);
  if (!t.is_string()) throw SchemaError(at(path, "type"), "expected a string");
  return t.get<std::string>();
}

}  // namespace

Json convex_set_to_json(const ConvexSet& k) {
  return std::visit(
      [&](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConvexSet::WholeSpace>) {
          return {{"type", "whole_space"}};
        } else if constexpr (std::is_same_v<T, ConvexSet::Box>) {
          return {{"type", "box"}, {"lower", bound_json(s.lower)}, {"upper", bound_json(s.upper)}};
        } else if constexpr (std::is_same_v<T, ConvexSet::Ball>) {
          return {{"type", "ball"}, {"center", vec_json(s.center)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, ConvexSet::Polyhedron>) {
          return {{"type", "polyhedron"}, {"A", matrix_json(s.a)}, {"b", vec_json(s.b)},
                  {"feasible_point", vec_json(s.feasible_point)}};
        } else {
          return {{"type", "ball_intersection"}, {"base", convex_set_to_json(*s.base)}, {"radius", s.radius}};
        }
      },
      k.variant());
}

ConvexSet convex_set_from_json(const Json& j, std::size_t n, const std::string& path) {
  const std::string type = type_of(j, path);
  try {
    if (type == "whole_space") return ConvexSet::whole_space(n);
    if (type == "box") {
      const double inf = std::numeric_limits<double>::infinity();
      return ConvexSet::box(bounds(require(j, "lower", path), n, -inf, at(path, "lower")),
                            bounds(require(j, "upper", path), n, inf, at(path, "upper")));
    }
    if (type == "ball")
      return ConvexSet::ball(vector(require(j, "center", path), n, at(path, "center")),
                             number(require(j, "radius", path), at(path, "radius")));
    if (type == "polyhedron") {
      Matrix a = matrix(require(j, "A", path), n, at(path, "A"));
      Vec b = vector(require(j, "b", path), a.rows(), at(path, "b"));
      std::optional<Vec> fp;
      if (auto it = j.find("feasible_point"); it != j.end() && !it->is_null())
        fp = vector(*it, n, at(path, "feasible_point"));
      return ConvexSet::polyhedron(std::move(a), std::move(b), std::move(fp));
    }
    if (type == "ball_intersection") {
      const ConvexSet base = convex_set_from_json(require(j, "base", path), n, at(path, "base"));
      return intersect_ball(base, number(require(j, "radius", path), at(path, "radius")));
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(at(path, "type"), "unknown set type '" + type + "'");
}

Json problem_to_json(const VviProblem& problem) {
  Json fields = Json::array();
  for (const auto& f : problem.fields()) {
    if (f.is_affine()) {
      fields.push_back({{"type", "affine"}, {"M", matrix_json(f.matrix())}, {"q", vec_json(f.offset())}});
    } else {
      Json exprs = Json::array();
      for (const auto& e : f.expressions()) exprs.push_back(print(e));
      fields.push_back({{"type", "poly"}, {"exprs", exprs}});
    }
  }
  return {{"name", problem.name()},
          {"n", problem.n()},
          {"m", problem.m()},
          {"fields", fields},
          {"K", convex_set_to_json(problem.constraint_set())}};
}

VviProblem problem_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("", "problem document must be an object");
  const std::size_t n = count(require(j, "n", ""), "n");
  const std::size_t m = count(require(j, "m", ""), "m");
  if (n == 0) throw SchemaError("n", "must be >= 1");
  if (m == 0) throw SchemaError("m", "must be >= 1");
  std::string name = "problem";
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw SchemaError("name", "expected a string");
    name = it->get<std::string>();
  }
  const Json& fj = require(j, "fields", "");
  if (!fj.is_array()) throw SchemaError("fields", "expected an array");
  if (fj.size() != m) throw SchemaError("fields", "expected m = " + std::to_string(m) + " fields, got " + std::to_string(fj.size()));

  std::vector<VectorField> fields;
  for (std::size_t l = 0; l < m; ++l) {
    const std::string path = idx("fields", l);
    const std::string type = type_of(fj[l], path);
    if (type == "poly") {
      const Json& ej = require(fj[l], "exprs", path);
      const std::string epath = at(path, "exprs");
      if (!ej.is_array() || ej.size() != n) throw SchemaError(epath, "expected an array of n = " + std::to_string(n) + " strings");
      std::vector<Expression> exprs;
      for (std::size_t i = 0; i < n; ++i) {
        if (!ej[i].is_string()) throw SchemaError(idx(epath, i), "expected a string");
        try {
          exprs.push_back(parse(ej[i].get<std::string>(), n));
        } catch (const ParseError& e) {
          throw SchemaError(idx(epath, i), e.what());
        }
      }
      fields.push_back(VectorField::polynomial(std::move(exprs), n));
    } else if (type == "affine") {
      Matrix mm = matrix(require(fj[l], "M", path), n, at(path, "M"), n);
      Vec q = vector(require(fj[l], "q", path), n, at(path, "q"));
      fields.push_back(VectorField::affine(std::move(mm), std::move(q)));
    } else {
      throw SchemaError(at(path, "type"), "unknown field type '" + type + "' (expected poly or affine)");
    }
  }
  ConvexSet k = convex_set_from_json(require(j, "K", ""), n, "K");
  return VviProblem(std::move(name), std::move(fields), std::move(k));
}

VviProblem read_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(j);
}

void write_problem_file(const VviProblem& problem, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << dump(problem_to_json(problem));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

VviProblem resolve_problem(std::string_view ref) {
  const std::string s(ref);
  std::error_code ec;
  if (std::filesystem::is_regular_file(s, ec)) return read_problem_file(s);
  try {
    return catalog_problem(ref);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("'" + s + "' is neither a problem file nor a catalog name (" + e.what() + ")");
  }
}

Json outcome_to_json(const SolveOutcome& o) {
  return {{"status", std::string(to_string(o.status))},
          {"point", vec_json(o.point)},
          {"residual", o.residual},
          {"iterations", o.iterations},
          {"min_step", o.min_step},
          {"max_step", o.max_step}};
}

Json component_report_to_json(const ComponentAnalysis& analysis, const TheoremVerdict& v, const ReportContext& ctx) {
  Json comps = Json::array();
  for (const auto& c : analysis.components) {
    Json probe = Json::array();
    for (const auto& e : c.probe_trace)
      probe.push_back({{"R", e.radius ? Json(*e.radius) : Json(nullptr)},
                       {"norm", e.norm},
                       {"xi", vec_json(e.xi)},
                       {"status", std::string(to_string(e.status))}});
    comps.push_back({{"id", c.id},
                     {"size", c.members.size()},
                     {"diameter", c.diameter},
                     {"max_norm", c.max_norm},
                     {"boundedness", std::string(to_string(c.boundedness))},
                     {"probe", probe}});
  }
  Json verdict = {{"target", std::string(to_string(ctx.target))},
                  {"component_count", v.component_count},
                  {"empty_set", v.empty_set},
                  {"all_components_unbounded", v.all_components_unbounded},
                  {"bounded_and_nonempty", v.bounded_and_nonempty},
                  {"connected", v.connected},
                  {"domain_coverage", v.domain_coverage},
                  {"monotone_certified", ctx.monotone_certified},
                  {"polyhedral", ctx.polyhedral},
                  {"consistency", std::string(to_string(v.consistency))},
                  {"notes", v.notes}};
  return {{"problem", ctx.problem_name},
          {"class", std::string(to_string(ctx.sample_set))},
          {"delta", analysis.delta},
          {"bridge_samples", ctx.bridge_samples},
          {"empty_set", analysis.empty_set},
          {"components", comps},
          {"verdict", verdict}};
}

Json monotone_to_json(const MonotoneReport& r) {
  Json j = {{"monotone_certified", r.monotone_certified}, {"min_pairing", r.min_pairing}, {"min_eig", r.min_eig}};
  if (r.witness)
    j["witness"] = {{"field", r.witness->field + 1},
                    {"x", vec_json(r.witness->x)},
                    {"y", vec_json(r.witness->y)},
                    {"pairing", r.witness->pairing}};
  else
    j["witness"] = nullptr;
  return j;
}

Json symmetry_to_json(const SymmetryReport& r) {
  return {{"class", std::string(to_string(r.symmetry_class))},
          {"max_sym_defect", r.max_sym_defect},
          {"max_skew_defect", r.max_skew_defect},
          {"degenerate", r.degenerate}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace vvi
