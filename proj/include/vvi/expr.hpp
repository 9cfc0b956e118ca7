#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vvi/linalg.hpp"

namespace vvi {

enum class ExprKind { Constant, Variable, Negate, Sum, Product, Power };

/// Immutable polynomial expression tree. Copies share nodes; evaluation is
/// reentrant. Variable indices are 0-based here and 1-based in text (`x1`).
class Expression {
 public:
  Expression();  // the constant 0

  static Expression constant(double value);
  static Expression variable(std::size_t index);
  static Expression negate(Expression operand);
  static Expression sum(Expression lhs, Expression rhs);
  static Expression product(Expression lhs, Expression rhs);
  static Expression power(Expression base, unsigned exponent);

  ExprKind kind() const;
  double constant_value() const;
  std::size_t variable_index() const;
  unsigned exponent() const;
  /// Operand of Negate / Power, left child of Sum / Product.
  const Expression& lhs() const;
  const Expression& rhs() const;

  bool is_constant(double value) const {
    return kind() == ExprKind::Constant && constant_value() == value;
  }

  double eval(std::span<const double> x) const;

  /// One past the largest variable index used (0 for constant expressions).
  std::size_t variable_bound() const;
  std::size_t node_count() const;

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Grammar: decimal literals, `x1..xn`, binary `+ - *`, integer `^`
/// (right-associative, exponent must fold to a nonnegative integer), unary
/// minus, parentheses. Precedence `^` > unary minus > `*` > `+ -`.
Expression parse(std::string_view text, std::size_t n);

/// Fully parenthesised text that parses back to a bit-identical evaluator.
std::string print(const Expression& e);

/// d e / d x_{index}. Only trivial simplification (constant folding, 0*e,
/// 1*e, e+0). Throws std::out_of_range if index >= n.
Expression differentiate(const Expression& e, std::size_t index, std::size_t n);

/// A map R^n -> R^n, either componentwise polynomial or affine x -> Mx + q.
class VectorField {
 public:
  /// Throws std::invalid_argument if the count is not n or a component uses
  /// a variable outside x1..xn.
  static VectorField polynomial(std::vector<Expression> components, std::size_t n);
  static VectorField affine(Matrix m, Vec q);

  std::size_t dimension() const { return n_; }
  bool is_affine() const;

  const std::vector<Expression>& expressions() const;
  const Matrix& matrix() const;
  const Vec& offset() const;

  Vec operator()(std::span<const double> x) const;
  void evaluate(std::span<const double> x, std::span<double> out) const;
  Matrix jacobian(std::span<const double> x) const;

  /// Polynomial form of this field (identity for polynomial fields).
  VectorField expanded() const;

 private:
  struct Polynomial {
    std::vector<Expression> components;
    std::vector<Expression> partials;  // row-major n x n, d f_i / d x_j
  };
  struct Affine {
    Matrix m;
    Vec q;
  };
  using Rep = std::variant<Polynomial, Affine>;

  VectorField(std::size_t n, std::shared_ptr<const Rep> rep) : n_(n), rep_(std::move(rep)) {}

  std::size_t n_ = 0;
  std::shared_ptr<const Rep> rep_;
};

inline Matrix jacobian(const VectorField& f, std::span<const double> x) { return f.jacobian(x); }

}  // namespace vvi
