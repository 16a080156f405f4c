#include "gmellin/expr.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "gmellin/expr_nodes.hpp"
#include "gmellin/special.hpp"

namespace gmellin {

using detail::ExprNode;
using detail::Fun;
using detail::Kind;

namespace {

Expr::NodePtr make_node(Kind k, double v = 0.0, Fun f = Fun::Exp,
                        Expr::NodePtr a = nullptr, Expr::NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->value = v;
  n->fun = f;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const Expr::NodePtr& n, double v) {
  return n->kind == Kind::Constant && n->value == v;
}

const char* fun_name(Fun f) {
  switch (f) {
    case Fun::Exp: return "exp";
    case Fun::Ln: return "ln";
    case Fun::Sin: return "sin";
    case Fun::Cos: return "cos";
    case Fun::Sqrt: return "sqrt";
    case Fun::Abs: return "abs";
    case Fun::Gamma: return "gamma";
  }
  return "?";
}

}  // namespace

Expr::Expr() : node_(make_node(Kind::Constant, 0.0)) {}

Expr Expr::constant(double v) { return Expr(make_node(Kind::Constant, v)); }
Expr Expr::variable() { return Expr(make_node(Kind::Variable)); }

bool Expr::is_constant() const { return node_->kind == Kind::Constant; }
bool Expr::is_constant(double v) const { return is_const(node_, v); }

// ---------------------------------------------------------------------------
// Folding builders. Only local identities: constant folding, 0/1 neutral
// elements, double negation. Enough to keep repeated differentiation from
// blowing the trees up.

Expr operator+(Expr a, Expr b) {
  if (a.node().kind == Kind::Constant && b.node().kind == Kind::Constant)
    return Expr::constant(a.node().value + b.node().value);
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr(make_node(Kind::Add, 0, Fun::Exp, a.node_, b.node_));
}

Expr operator-(Expr a, Expr b) {
  if (a.node().kind == Kind::Constant && b.node().kind == Kind::Constant)
    return Expr::constant(a.node().value - b.node().value);
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr(make_node(Kind::Sub, 0, Fun::Exp, a.node_, b.node_));
}

Expr operator*(Expr a, Expr b) {
  if (a.node().kind == Kind::Constant && b.node().kind == Kind::Constant)
    return Expr::constant(a.node().value * b.node().value);
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr(make_node(Kind::Mul, 0, Fun::Exp, a.node_, b.node_));
}

Expr operator/(Expr a, Expr b) {
  if (a.node().kind == Kind::Constant && b.node().kind == Kind::Constant &&
      b.node().value != 0.0)
    return Expr::constant(a.node().value / b.node().value);
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr(make_node(Kind::Div, 0, Fun::Exp, a.node_, b.node_));
}

Expr operator-(Expr a) {
  if (a.node().kind == Kind::Constant) return Expr::constant(-a.node().value);
  if (a.node().kind == Kind::Neg) return Expr(a.node().a);
  return Expr(make_node(Kind::Neg, 0, Fun::Exp, a.node_));
}

Expr pow(Expr base, Expr exponent) {
  if (exponent.is_constant(1.0)) return base;
  if (exponent.is_constant(0.0)) return Expr::constant(1.0);
  if (base.node().kind == Kind::Constant && exponent.node().kind == Kind::Constant)
    return Expr::constant(std::pow(base.node().value, exponent.node().value));
  return Expr(make_node(Kind::Pow, 0, Fun::Exp, base.node_, exponent.node_));
}

namespace {

Expr make_fun(Fun f, const Expr& a) {
  if (a.node().kind == Kind::Constant && f != Fun::Gamma) {
    const double v = a.node().value;
    switch (f) {
      case Fun::Exp: return Expr::constant(std::exp(v));
      case Fun::Ln: return Expr::constant(std::log(v));
      case Fun::Sin: return Expr::constant(std::sin(v));
      case Fun::Cos: return Expr::constant(std::cos(v));
      case Fun::Sqrt: return Expr::constant(std::sqrt(v));
      case Fun::Abs: return Expr::constant(std::fabs(v));
      default: break;
    }
  }
  return Expr(make_node(Kind::Fun, 0, f, a.node_ptr()));
}

}  // namespace

Expr exp(Expr a) { return make_fun(Fun::Exp, a); }
Expr ln(Expr a) { return make_fun(Fun::Ln, a); }
Expr sin(Expr a) { return make_fun(Fun::Sin, a); }
Expr cos(Expr a) { return make_fun(Fun::Cos, a); }
Expr sqrt(Expr a) { return make_fun(Fun::Sqrt, a); }
Expr abs(Expr a) { return make_fun(Fun::Abs, a); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// 0 * inf -> 0 instead of NaN. On (0, inf) a factor that underflowed to 0
// is an e^{-large} tail, which outruns any power-law overflow in the other
// factor; without this, transforms of x^k e^{-cx} die at huge nodes.
double mul_decayed(double a, double b) {
  const double p = a * b;
  if (std::isnan(p) && ((a == 0.0 && !std::isnan(b)) || (b == 0.0 && !std::isnan(a))))
    return 0.0;
  return p;
}

Complex mul_decayed(const Complex& a, const Complex& b) {
  const Complex p = a * b;
  if ((std::isnan(p.real()) || std::isnan(p.imag()))) {
    if (a == Complex(0.0, 0.0) && !std::isnan(b.real()) && !std::isnan(b.imag()))
      return Complex(0.0, 0.0);
    if (b == Complex(0.0, 0.0) && !std::isnan(a.real()) && !std::isnan(a.imag()))
      return Complex(0.0, 0.0);
  }
  return p;
}

double eval_node(const ExprNode& n, double x) {
  switch (n.kind) {
    case Kind::Constant: return n.value;
    case Kind::Variable: return x;
    case Kind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Kind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Kind::Mul: return mul_decayed(eval_node(*n.a, x), eval_node(*n.b, x));
    case Kind::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
    case Kind::Pow: return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
    case Kind::Neg: return -eval_node(*n.a, x);
    case Kind::Fun: {
      const double v = eval_node(*n.a, x);
      switch (n.fun) {
        case Fun::Exp: return std::exp(v);
        case Fun::Ln: return std::log(v);
        case Fun::Sin: return std::sin(v);
        case Fun::Cos: return std::cos(v);
        case Fun::Sqrt: return std::sqrt(v);
        case Fun::Abs: return std::fabs(v);
        case Fun::Gamma: return std::tgamma(v);
      }
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Complex eval_node(const ExprNode& n, Complex x) {
  switch (n.kind) {
    case Kind::Constant: return Complex(n.value, 0.0);
    case Kind::Variable: return x;
    case Kind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Kind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Kind::Mul: return mul_decayed(eval_node(*n.a, x), eval_node(*n.b, x));
    case Kind::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
    case Kind::Pow: return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
    case Kind::Neg: return -eval_node(*n.a, x);
    case Kind::Fun: {
      const Complex v = eval_node(*n.a, x);
      switch (n.fun) {
        case Fun::Exp: return std::exp(v);
        case Fun::Ln: return std::log(v);
        case Fun::Sin: return std::sin(v);
        case Fun::Cos: return std::cos(v);
        case Fun::Sqrt: return std::sqrt(v);
        case Fun::Abs: return Complex(std::abs(v), 0.0);
        case Fun::Gamma: return gamma_complex(v);
      }
    }
  }
  return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
}

double eval_node_checked(const ExprNode& n, double x) {
  switch (n.kind) {
    case Kind::Constant: return n.value;
    case Kind::Variable: return x;
    case Kind::Add: return eval_node_checked(*n.a, x) + eval_node_checked(*n.b, x);
    case Kind::Sub: return eval_node_checked(*n.a, x) - eval_node_checked(*n.b, x);
    case Kind::Mul: return eval_node_checked(*n.a, x) * eval_node_checked(*n.b, x);
    case Kind::Div: {
      const double d = eval_node_checked(*n.b, x);
      if (d == 0.0) throw EvalError("division by zero");
      return eval_node_checked(*n.a, x) / d;
    }
    case Kind::Pow: {
      const double b = eval_node_checked(*n.a, x);
      const double e = eval_node_checked(*n.b, x);
      const double r = std::pow(b, e);
      if (!std::isfinite(r))
        throw EvalError("power outside domain: " + std::to_string(b) + "^" +
                        std::to_string(e));
      return r;
    }
    case Kind::Neg: return -eval_node_checked(*n.a, x);
    case Kind::Fun: {
      const double v = eval_node_checked(*n.a, x);
      switch (n.fun) {
        case Fun::Exp: return std::exp(v);
        case Fun::Ln:
          if (v <= 0.0) throw EvalError("ln of nonpositive value");
          return std::log(v);
        case Fun::Sin: return std::sin(v);
        case Fun::Cos: return std::cos(v);
        case Fun::Sqrt:
          if (v < 0.0) throw EvalError("sqrt of negative value");
          return std::sqrt(v);
        case Fun::Abs: return std::fabs(v);
        case Fun::Gamma:
          if (v <= 0.0 && v == std::round(v)) throw EvalError("gamma pole");
          return std::tgamma(v);
      }
    }
  }
  throw EvalError("corrupt expression node");
}

}  // namespace

double Expr::eval(double x) const { return eval_node(*node_, x); }
Complex Expr::eval(Complex x) const { return eval_node(*node_, x); }
double Expr::eval_checked(double x) const { return eval_node_checked(*node_, x); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr wrap(Expr::NodePtr n) { return Expr(std::move(n)); }

Expr diff_node(const Expr::NodePtr& n) {
  const Expr a = n->a ? wrap(n->a) : Expr();
  const Expr b = n->b ? wrap(n->b) : Expr();
  switch (n->kind) {
    case Kind::Constant: return Expr::constant(0.0);
    case Kind::Variable: return Expr::constant(1.0);
    case Kind::Add: return diff_node(n->a) + diff_node(n->b);
    case Kind::Sub: return diff_node(n->a) - diff_node(n->b);
    case Kind::Mul: return diff_node(n->a) * b + a * diff_node(n->b);
    case Kind::Div:
      return (diff_node(n->a) * b - a * diff_node(n->b)) / (b * b);
    case Kind::Pow: {
      if (n->b->kind == Kind::Constant) {
        const double e = n->b->value;
        return Expr::constant(e) * pow(a, Expr::constant(e - 1.0)) * diff_node(n->a);
      }
      // u^v = exp(v ln u)
      return pow(a, b) * (diff_node(n->b) * ln(a) + b * diff_node(n->a) / a);
    }
    case Kind::Neg: return -diff_node(n->a);
    case Kind::Fun: {
      const Expr da = diff_node(n->a);
      switch (n->fun) {
        case Fun::Exp: return exp(a) * da;
        case Fun::Ln: return da / a;
        case Fun::Sin: return cos(a) * da;
        case Fun::Cos: return -(sin(a) * da);
        case Fun::Sqrt: return da / (Expr::constant(2.0) * sqrt(a));
        case Fun::Abs: return (a / abs(a)) * da;  // sign; undefined at 0
        case Fun::Gamma:
          throw EvalError("gamma is not differentiable in this grammar");
      }
    }
  }
  throw EvalError("corrupt expression node");
}

}  // namespace

Expr Expr::derivative() const { return diff_node(node_); }

// ---------------------------------------------------------------------------
// Substitution

namespace {

Expr subst_node(const Expr::NodePtr& n, const Expr& inner) {
  switch (n->kind) {
    case Kind::Constant: return wrap(n);
    case Kind::Variable: return inner;
    case Kind::Add: return subst_node(n->a, inner) + subst_node(n->b, inner);
    case Kind::Sub: return subst_node(n->a, inner) - subst_node(n->b, inner);
    case Kind::Mul: return subst_node(n->a, inner) * subst_node(n->b, inner);
    case Kind::Div: return subst_node(n->a, inner) / subst_node(n->b, inner);
    case Kind::Pow: return pow(subst_node(n->a, inner), subst_node(n->b, inner));
    case Kind::Neg: return -subst_node(n->a, inner);
    case Kind::Fun:
      return Expr(make_node(Kind::Fun, 0, n->fun,
                            subst_node(n->a, inner).node_ptr()));
  }
  throw EvalError("corrupt expression node");
}

}  // namespace

Expr Expr::substitute(const Expr& inner) const { return subst_node(node_, inner); }

// ---------------------------------------------------------------------------
// Printing. Precedence mirrors the grammar: sums < products < powers < atoms.

namespace {

enum Prec { kSum = 0, kProduct = 1, kPower = 2, kAtom = 3 };

void print_node(std::ostream& os, const ExprNode& n, int parent_prec);

void print_child(std::ostream& os, const ExprNode& n, int prec_needed) {
  print_node(os, n, prec_needed);
}

void print_number(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << v;
  os << tmp.str();
}

int node_prec(const ExprNode& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub: return kSum;
    case Kind::Mul:
    case Kind::Div: return kProduct;
    case Kind::Pow: return kPower;
    case Kind::Neg: return kPower;  // '-' base sits at factor level
    case Kind::Constant: return (n.value < 0.0) ? kPower : kAtom;
    default: return kAtom;
  }
}

void print_node(std::ostream& os, const ExprNode& n, int parent_prec) {
  const bool parens = node_prec(n) < parent_prec;
  if (parens) os << '(';
  switch (n.kind) {
    case Kind::Constant:
      print_number(os, n.value);
      break;
    case Kind::Variable:
      os << 'x';
      break;
    case Kind::Add:
      print_child(os, *n.a, kSum);
      os << '+';
      print_child(os, *n.b, kProduct);
      break;
    case Kind::Sub:
      print_child(os, *n.a, kSum);
      os << '-';
      print_child(os, *n.b, kProduct);
      break;
    case Kind::Mul:
      print_child(os, *n.a, kProduct);
      os << '*';
      print_child(os, *n.b, kPower);
      break;
    case Kind::Div:
      print_child(os, *n.a, kProduct);
      os << '/';
      print_child(os, *n.b, kPower);
      break;
    case Kind::Pow:
      print_child(os, *n.a, kAtom);
      os << '^';
      print_child(os, *n.b, kPower);  // right associative
      break;
    case Kind::Neg:
      // '-' binds tighter than '^' in this grammar, so anything below an
      // atom needs parentheses to survive a round trip.
      os << '-';
      print_child(os, *n.a, kAtom);
      break;
    case Kind::Fun:
      os << fun_name(n.fun) << '(';
      print_node(os, *n.a, kSum);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print_node(os, *node_, kSum);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over the grammar in the header.

namespace {

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opt) : src_(src), opt_(opt) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  const ParseOptions& opt_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      if (consume('+'))
        e = e + parse_term();
      else if (consume('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (consume('*'))
        e = e * parse_factor();
      else if (consume('/'))
        e = e / parse_factor();
      else
        return e;
    }
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (consume('^')) return pow(base, parse_factor());
    return base;
  }

  Expr parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return -parse_base();
    }
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to something else; not part of the number
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Expr::constant(v);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + text + "'", start);
    }
  }

  Expr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           std::isalpha(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (name == opt_.variable) return Expr::variable();
    Expr (*builder)(Expr) = nullptr;
    if (name == "exp") builder = static_cast<Expr (*)(Expr)>(&gmellin::exp);
    else if (name == "ln") builder = &gmellin::ln;
    else if (name == "sin") builder = static_cast<Expr (*)(Expr)>(&gmellin::sin);
    else if (name == "cos") builder = static_cast<Expr (*)(Expr)>(&gmellin::cos);
    else if (name == "sqrt") builder = static_cast<Expr (*)(Expr)>(&gmellin::sqrt);
    else if (name == "abs") builder = static_cast<Expr (*)(Expr)>(&gmellin::abs);
    if (builder == nullptr && !(opt_.allow_gamma && name == "gamma"))
      throw ParseError("unknown identifier '" + name + "'", start);
    if (!consume('(')) throw ParseError("expected '(' after '" + name + "'", pos_);
    Expr arg = parse_sum();
    if (!consume(')')) throw ParseError("expected ')'", pos_);
    if (builder != nullptr) return builder(arg);
    return Expr(make_node(Kind::Fun, 0, Fun::Gamma, arg.node_ptr()));
  }
};

}  // namespace

Expr parse_expr(std::string_view source) { return parse_expr(source, ParseOptions{}); }

Expr parse_expr(std::string_view source, const ParseOptions& options) {
  Parser p(source, options);
  return p.run();
}

}  // namespace gmellin
