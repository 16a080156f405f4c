#pragma once

// Tree layout behind Expr. Internal: included where structural pattern
// matching on expressions is needed (inverse recognition, printing).

#include <memory>

namespace gmellin::detail {

enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Fun };
enum class Fun { Exp, Ln, Sin, Cos, Sqrt, Abs, Gamma };

struct ExprNode {
  Kind kind;
  double value = 0.0;  // Constant
  Fun fun = Fun::Exp;  // Fun
  std::shared_ptr<const ExprNode> a, b;
};

}  // namespace gmellin::detail
