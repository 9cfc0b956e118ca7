#include "vvi/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace vvi {

struct Expression::Node {
  ExprKind kind = ExprKind::Constant;
  double value = 0.0;
  std::size_t index = 0;
  unsigned exponent = 0;
  Expression lhs{nullptr};
  Expression rhs{nullptr};
  std::size_t variable_bound = 0;
  std::size_t size = 1;
};

namespace {
constexpr unsigned kMaxExponent = 4096;
}

Expression::Expression() : Expression(constant(0.0)) {}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Constant;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Variable;
  n->index = index;
  n->variable_bound = index + 1;
  return Expression(std::move(n));
}

Expression Expression::negate(Expression operand) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Negate;
  n->variable_bound = operand.variable_bound();
  n->size = operand.node_count() + 1;
  n->lhs = std::move(operand);
  return Expression(std::move(n));
}

Expression Expression::sum(Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Sum;
  n->variable_bound = std::max(lhs.variable_bound(), rhs.variable_bound());
  n->size = lhs.node_count() + rhs.node_count() + 1;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expression(std::move(n));
}

Expression Expression::product(Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Product;
  n->variable_bound = std::max(lhs.variable_bound(), rhs.variable_bound());
  n->size = lhs.node_count() + rhs.node_count() + 1;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expression(std::move(n));
}

Expression Expression::power(Expression base, unsigned exponent) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Power;
  n->exponent = exponent;
  n->variable_bound = base.variable_bound();
  n->size = base.node_count() + 1;
  n->lhs = std::move(base);
  return Expression(std::move(n));
}

ExprKind Expression::kind() const { return node_->kind; }
double Expression::constant_value() const { return node_->value; }
std::size_t Expression::variable_index() const { return node_->index; }
unsigned Expression::exponent() const { return node_->exponent; }
const Expression& Expression::lhs() const { return node_->lhs; }
const Expression& Expression::rhs() const { return node_->rhs; }
std::size_t Expression::variable_bound() const { return node_->variable_bound; }
std::size_t Expression::node_count() const { return node_->size; }

namespace {
double integer_power(double base, unsigned k) {
  if (k == 0) return 1.0;
  double r = base;
  for (unsigned i = 1; i < k; ++i) r *= base;
  return r;
}
}  // namespace

double Expression::eval(std::span<const double> x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case ExprKind::Constant: return n.value;
    case ExprKind::Variable: return x[n.index];
    case ExprKind::Negate: return -n.lhs.eval(x);
    case ExprKind::Sum: return n.lhs.eval(x) + n.rhs.eval(x);
    case ExprKind::Product: return n.lhs.eval(x) * n.rhs.eval(x);
    case ExprKind::Power: return integer_power(n.lhs.eval(x), n.exponent);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t n) : text_(text), n_(n) {}

  Expression run() {
    Expression e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static Expression negated(Expression e) {
    if (e.kind() == ExprKind::Constant) return Expression::constant(-e.constant_value());
    return Expression::negate(std::move(e));
  }

  Expression expr() {
    Expression acc = term();
    for (;;) {
      if (accept('+')) {
        acc = Expression::sum(std::move(acc), term());
      } else if (accept('-')) {
        acc = Expression::sum(std::move(acc), negated(term()));
      } else {
        return acc;
      }
    }
  }

  Expression term() {
    Expression acc = unary();
    while (accept('*')) acc = Expression::product(std::move(acc), unary());
    return acc;
  }

  Expression unary() {
    if (accept('-')) return negated(unary());
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    // Right-associative: the exponent is itself a unary/power expression.
    Expression ex = unary();
    if (ex.variable_bound() != 0) fail_at("exponent must be a constant", at);
    const double v = ex.eval({});
    if (!(v >= 0.0)) fail_at("negative exponent", at);
    if (v != std::floor(v)) fail_at("non-integer exponent", at);
    if (v > kMaxExponent) fail_at("exponent too large", at);
    return Expression::power(std::move(base), static_cast<unsigned>(v));
  }

  Expression primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (c == 'x') {
      const std::size_t at = pos_;
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail_at("expected variable index after 'x'", at);
      std::size_t idx = 0;
      auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, idx);
      if (ec != std::errc() || idx < 1 || idx > n_)
        fail_at("variable index out of range (dimension " + std::to_string(n_) + ")", at);
      (void)p;
      return Expression::variable(idx - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (exp_start == pos_) pos_ = save;
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || p != text_.data() + pos_ || !std::isfinite(v))
      fail_at("malformed number", start);
    return Expression::constant(v);
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view text, std::size_t n) { return Parser(text, n).run(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void print_to(const Expression& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Constant: {
      const double v = e.constant_value();
      if (std::signbit(v)) {
        out += "(-";
        out += shortest(-v);
        out += ')';
      } else {
        out += shortest(v);
      }
      return;
    }
    case ExprKind::Variable:
      out += 'x';
      out += std::to_string(e.variable_index() + 1);
      return;
    case ExprKind::Negate:
      out += "(-";
      print_to(e.lhs(), out);
      out += ')';
      return;
    case ExprKind::Sum:
    case ExprKind::Product:
      out += '(';
      print_to(e.lhs(), out);
      out += e.kind() == ExprKind::Sum ? " + " : " * ";
      print_to(e.rhs(), out);
      out += ')';
      return;
    case ExprKind::Power:
      out += '(';
      print_to(e.lhs(), out);
      out += '^';
      out += std::to_string(e.exponent());
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expression& e) {
  std::string out;
  print_to(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expression s_add(Expression a, Expression b) {
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return Expression::constant(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expression::sum(std::move(a), std::move(b));
}

Expression s_mul(Expression a, Expression b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expression::constant(0.0);
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return Expression::constant(a.constant_value() * b.constant_value());
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expression::product(std::move(a), std::move(b));
}

Expression s_neg(Expression a) {
  if (a.kind() == ExprKind::Constant) return Expression::constant(-a.constant_value());
  return Expression::negate(std::move(a));
}

Expression s_pow(Expression a, unsigned k) {
  if (k == 0) return Expression::constant(1.0);
  if (k == 1) return a;
  if (a.kind() == ExprKind::Constant) return Expression::constant(integer_power(a.constant_value(), k));
  return Expression::power(std::move(a), k);
}

Expression derive(const Expression& e, std::size_t i) {
  if (e.variable_bound() <= i) return Expression::constant(0.0);
  switch (e.kind()) {
    case ExprKind::Constant: return Expression::constant(0.0);
    case ExprKind::Variable: return Expression::constant(e.variable_index() == i ? 1.0 : 0.0);
    case ExprKind::Negate: return s_neg(derive(e.lhs(), i));
    case ExprKind::Sum: return s_add(derive(e.lhs(), i), derive(e.rhs(), i));
    case ExprKind::Product:
      return s_add(s_mul(derive(e.lhs(), i), e.rhs()), s_mul(e.lhs(), derive(e.rhs(), i)));
    case ExprKind::Power: {
      const unsigned k = e.exponent();
      if (k == 0) return Expression::constant(0.0);
      return s_mul(s_mul(Expression::constant(static_cast<double>(k)), s_pow(e.lhs(), k - 1)),
                   derive(e.lhs(), i));
    }
  }
  return Expression::constant(0.0);
}

}  // namespace

Expression differentiate(const Expression& e, std::size_t index, std::size_t n) {
  if (index >= n)
    throw std::out_of_range("differentiate: variable index " + std::to_string(index + 1) +
                            " out of range for dimension " + std::to_string(n));
  return derive(e, index);
}

// ---------------------------------------------------------------------------
// VectorField

VectorField VectorField::polynomial(std::vector<Expression> components, std::size_t n) {
  if (n == 0) throw std::invalid_argument("vector field dimension must be positive");
  if (components.size() != n)
    throw std::invalid_argument("polynomial field needs " + std::to_string(n) + " components, got " +
                                std::to_string(components.size()));
  for (std::size_t i = 0; i < n; ++i)
    if (components[i].variable_bound() > n)
      throw std::invalid_argument("component " + std::to_string(i + 1) +
                                  " uses a variable outside x1..x" + std::to_string(n));
  Polynomial p;
  p.partials.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.partials.push_back(differentiate(components[i], j, n));
  p.components = std::move(components);
  return VectorField(n, std::make_shared<const Rep>(std::move(p)));
}

VectorField VectorField::affine(Matrix m, Vec q) {
  const std::size_t n = q.size();
  if (n == 0) throw std::invalid_argument("vector field dimension must be positive");
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("affine field needs an " + std::to_string(n) + "x" +
                                std::to_string(n) + " matrix");
  return VectorField(n, std::make_shared<const Rep>(Affine{std::move(m), std::move(q)}));
}

bool VectorField::is_affine() const { return std::holds_alternative<Affine>(*rep_); }

const std::vector<Expression>& VectorField::expressions() const {
  if (is_affine()) throw std::logic_error("expressions() on an affine field");
  return std::get<Polynomial>(*rep_).components;
}

const Matrix& VectorField::matrix() const {
  if (!is_affine()) throw std::logic_error("matrix() on a polynomial field");
  return std::get<Affine>(*rep_).m;
}

const Vec& VectorField::offset() const {
  if (!is_affine()) throw std::logic_error("offset() on a polynomial field");
  return std::get<Affine>(*rep_).q;
}

void VectorField::evaluate(std::span<const double> x, std::span<double> out) const {
  if (x.size() != n_ || out.size() != n_) throw std::invalid_argument("vector field: dimension mismatch");
  if (const auto* a = std::get_if<Affine>(rep_.get())) {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += a->m(i, j) * x[j];
      out[i] = s + a->q[i];
    }
    return;
  }
  const auto& p = std::get<Polynomial>(*rep_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = p.components[i].eval(x);
}

Vec VectorField::operator()(std::span<const double> x) const {
  Vec out(n_);
  evaluate(x, out);
  return out;
}

Matrix VectorField::jacobian(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("jacobian: dimension mismatch");
  if (const auto* a = std::get_if<Affine>(rep_.get())) return a->m;
  const auto& p = std::get<Polynomial>(*rep_);
  Matrix j(n_, n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) j(r, c) = p.partials[r * n_ + c].eval(x);
  return j;
}

VectorField VectorField::expanded() const {
  const auto* a = std::get_if<Affine>(rep_.get());
  if (!a) return *this;
  std::vector<Expression> comps;
  comps.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    Expression acc = Expression::product(Expression::constant(a->m(i, 0)), Expression::variable(0));
    for (std::size_t j = 1; j < n_; ++j)
      acc = Expression::sum(std::move(acc),
                            Expression::product(Expression::constant(a->m(i, j)), Expression::variable(j)));
    comps.push_back(Expression::sum(std::move(acc), Expression::constant(a->q[i])));
  }
  return polynomial(std::move(comps), n_);
}

}  // namespace vvi
