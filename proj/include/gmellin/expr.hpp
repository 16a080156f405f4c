#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gmellin {

using Complex = std::complex<double>;

/// Raised by parse_expr; `offset` is the byte position of the offending token.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t offset_)
      : std::runtime_error(msg + " (at offset " + std::to_string(offset_) + ")"),
        offset(offset_) {}
  std::size_t offset;
};

/// Raised by Expr::eval_checked when evaluation leaves the domain
/// (log of a nonpositive value, sqrt of a negative, division by zero, ...).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
struct ExprNode;
}

/// Immutable expression tree in one real variable. Plain eval() follows IEEE
/// semantics (domain violations yield NaN/Inf); eval_checked() turns them
/// into EvalError. Subtrees are shared, so copies are cheap and every
/// operation is safe to call concurrently.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double v);
  static Expr variable();

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;
  double eval_checked(double x) const;
  Complex eval(Complex x) const;

  /// Exact derivative as a new tree (constant-folded, not CAS-simplified).
  Expr derivative() const;

  /// Replace the variable by another tree: (f.substitute(g))(x) = f(g(x)).
  Expr substitute(const Expr& inner) const;

  /// Canonical text form; parse_expr(str()) rebuilds an equivalent tree and
  /// printing is idempotent after one round trip.
  std::string str() const;

  bool is_constant() const;
  bool is_constant(double v) const;

  // Tree builders.
  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);
  friend Expr operator-(Expr a);
  friend Expr pow(Expr base, Expr exponent);
  friend Expr exp(Expr a);
  friend Expr ln(Expr a);
  friend Expr sin(Expr a);
  friend Expr cos(Expr a);
  friend Expr sqrt(Expr a);
  friend Expr abs(Expr a);

  using NodePtr = std::shared_ptr<const detail::ExprNode>;
  explicit Expr(NodePtr n) : node_(std::move(n)) {}
  const detail::ExprNode& node() const { return *node_; }
  const NodePtr& node_ptr() const { return node_; }

 private:
  NodePtr node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr pow(Expr base, Expr exponent);
Expr exp(Expr a);
Expr ln(Expr a);
Expr sin(Expr a);
Expr cos(Expr a);
Expr sqrt(Expr a);
Expr abs(Expr a);

struct ParseOptions {
  std::string variable = "x";
  bool allow_gamma = false;  // accepts gamma(...) -- used by the CLI for F(p)
};

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' factor)?
///   base   := NUMBER | VAR | IDENT '(' expr ')' | '(' expr ')' | '-' base
/// with IDENT in {exp, ln, sin, cos, sqrt, abs}. Whitespace is insignificant;
/// numbers are decimal with an optional exponent part.
Expr parse_expr(std::string_view source);
Expr parse_expr(std::string_view source, const ParseOptions& options);

}  // namespace gmellin
