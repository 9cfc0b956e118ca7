#include "vvi/catalog.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "vvi/rng.hpp"

namespace vvi {

namespace {

VectorField poly(std::initializer_list<const char*> exprs) {
  std::vector<Expression> comps;
  for (const char* e : exprs) comps.push_back(parse(e, exprs.size()));
  return VectorField::polynomial(std::move(comps), exprs.size());
}

void check_unit_interval(double xi1) {
  if (!(xi1 >= 0.0 && xi1 <= 1.0)) throw std::domain_error("xi1 must lie in [0, 1]");
}

}  // namespace

VviProblem example_q() {
  return VviProblem("example-q", {poly({"x1^3", "x2^3 - 1"}), poly({"x1^3 - 1", "x2^3"})},
                    ConvexSet::whole_space(2));
}

Vec closed_form_q(double xi1) {
  check_unit_interval(xi1);
  return {std::cbrt(1.0 - xi1), std::cbrt(xi1)};
}

VviProblem example_p() {
  return VviProblem("example-p", {poly({"-x2 - 1", "x1^3 - 1"}), poly({"x2 - 1", "-x1^3 - 1"})},
                    ConvexSet::whole_space(2));
}

std::optional<Vec> closed_form_p(double xi1) {
  check_unit_interval(xi1);
  const double a = 2.0 * xi1 - 1.0;
  if (a == 0.0) return std::nullopt;
  return Vec{1.0 / std::cbrt(a), -1.0 / a};
}

VviProblem weak_gap_example() {
  const Matrix id = Matrix::identity(2);
  return VviProblem("weak-gap", {VectorField::affine(id, {0.0, 0.0}), VectorField::affine(id, {-1.0, 0.0})},
                    ConvexSet::whole_space(2));
}

std::optional<AffineClass> parse_affine_class(std::string_view s) {
  if (s == "symmetric") return AffineClass::Symmetric;
  if (s == "skew") return AffineClass::Skew;
  if (s == "mixed") return AffineClass::Mixed;
  return std::nullopt;
}

std::string_view to_string(AffineClass c) {
  switch (c) {
    case AffineClass::Symmetric: return "symmetric";
    case AffineClass::Skew: return "skew";
    case AffineClass::Mixed: return "mixed";
  }
  return "?";
}

std::optional<ConstraintKind> parse_constraint_kind(std::string_view s) {
  if (s == "whole") return ConstraintKind::WholeSpace;
  if (s == "box") return ConstraintKind::Box;
  if (s == "simplex") return ConstraintKind::Simplex;
  return std::nullopt;
}

std::string_view to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::WholeSpace: return "whole";
    case ConstraintKind::Box: return "box";
    case ConstraintKind::Simplex: return "simplex";
  }
  return "?";
}

VviProblem random_affine_vvi(std::size_t n, std::size_t m, std::uint64_t seed, AffineClass cls,
                             ConstraintKind kind) {
  if (n == 0 || m == 0) throw std::invalid_argument("random_affine_vvi: n and m must be >= 1");
  Rng rng(seed);
  auto random_matrix = [&] {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    return a;
  };
  std::vector<VectorField> fields;
  for (std::size_t l = 0; l < m; ++l) {
    Matrix mat(n, n);
    if (cls != AffineClass::Skew) {
      const Matrix b = random_matrix();
      mat = b.transposed() * b;
    }
    if (cls != AffineClass::Symmetric) {
      const Matrix a = random_matrix();
      mat = mat + (a - a.transposed());
    }
    Vec q(n);
    for (double& v : q) v = rng.uniform(-1.0, 1.0);
    fields.push_back(VectorField::affine(std::move(mat), std::move(q)));
  }

  ConvexSet k = ConvexSet::whole_space(n);
  if (kind == ConstraintKind::Box) {
    k = ConvexSet::box(Vec(n, -1.0), Vec(n, 1.0));
  } else if (kind == ConstraintKind::Simplex) {
    Matrix a(n + 1, n);
    Vec b(n + 1, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      a(i, i) = -1.0;
      a(n, i) = 1.0;
    }
    k = ConvexSet::polyhedron(std::move(a), std::move(b), Vec(n, 0.0));
  }
  const std::string name = "random-affine:" + std::string(to_string(cls)) + ":" + std::to_string(n) + ":" +
                           std::to_string(m) + ":" + std::to_string(seed) + ":" + std::string(to_string(kind));
  return VviProblem(name, std::move(fields), std::move(k));
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("catalog name: bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

VviProblem catalog_problem(std::string_view name) {
  if (name == "example-q") return example_q();
  if (name == "example-p") return example_p();
  if (name == "weak-gap") return weak_gap_example();
  const auto parts = split(name, ':');
  if (parts.size() >= 5 && parts.size() <= 6 && parts[0] == "random-affine") {
    const auto cls = parse_affine_class(parts[1]);
    if (!cls) throw std::invalid_argument("catalog name: unknown class '" + std::string(parts[1]) + "'");
    const auto n = parse_number<std::size_t>(parts[2], "n");
    const auto m = parse_number<std::size_t>(parts[3], "m");
    const auto seed = parse_number<std::uint64_t>(parts[4], "seed");
    ConstraintKind kind = ConstraintKind::Box;
    if (parts.size() == 6) {
      const auto k = parse_constraint_kind(parts[5]);
      if (!k) throw std::invalid_argument("catalog name: unknown constraint '" + std::string(parts[5]) + "'");
      kind = *k;
    }
    if (n == 0 || m == 0) throw std::invalid_argument("catalog name: n and m must be >= 1");
    return random_affine_vvi(n, m, seed, *cls, kind);
  }
  throw std::invalid_argument("unknown catalog problem '" + std::string(name) + "'");
}

std::vector<std::string> catalog_sample_names() {
  return {"example-q",
          "example-p",
          "weak-gap",
          "random-affine:symmetric:2:2:1:box",
          "random-affine:skew:3:2:2:box",
          "random-affine:mixed:2:3:3:simplex",
          "random-affine:symmetric:3:2:4:whole"};
}

}  // namespace vvi
