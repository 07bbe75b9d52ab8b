#pragma once

#include <memory>
#include <string>
#include <vector>

#include "carroll/chart.hpp"
#include "carroll/taylor.hpp"

namespace carroll {

// Grammar:
//   expression := term { ('+'|'-') term }
//   term       := unary { ('*'|'/') unary }
//   unary      := '-' unary | power
//   power      := atom [ '^' unary ]          (right-associative)
//   atom       := number | ident | ident '(' expression ')' | '(' expression ')'
// '^' binds tightest, then unary minus, then '*'/'/', then '+'/'-'. The
// exponent subtree must fold to an integer constant; only integer powers are
// in the grammar so that every field stays C^2 away from poles.
// Functions: sin cos tan exp log sqrt tanh.

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Tanh };

const char* func_name(Func f);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind;
  double number = 0.0;    // Number
  int var = -1;           // Var: coordinate index in the chart
  std::string var_name;   // Var: original spelling
  Func func = Func::Sin;  // Call
  long long exponent = 0; // Pow (folded integer)
  ExprPtr a, b;

  static ExprPtr make_number(double v);
  static ExprPtr make_var(int index, std::string name);
  static ExprPtr make_neg(ExprPtr a);
  static ExprPtr make_binary(Kind k, ExprPtr a, ExprPtr b);
  static ExprPtr make_pow(ExprPtr base, long long exponent);
  static ExprPtr make_call(Func f, ExprPtr a);
};

// Throws ParseError (with offset) on syntax errors, unknown identifiers, and
// unknown functions. Free variables must name chart coordinates.
ExprPtr parse_expr(const std::string& text, const Chart& chart);

// Minimal-parenthesis form; re-parses to an equivalent tree.
std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

// Evaluation over doubles (fast path) and Taylor carriers. Domain errors are
// reported as EvalError carrying the printed offending subexpression.
double eval_value(const Expr& e, const std::vector<double>& vars);
Taylor eval_taylor(const Expr& e, const std::vector<Taylor>& vars);

// Exact symbolic d/dx_var, constant-folded. Used when building models whose
// data contains derivatives of other data (e.g. direct-sum structure
// functions); jet evaluation itself never uses this.
ExprPtr derivative(const ExprPtr& e, int var);

// Constant folding plus identity pruning (0+f, 1*f, f^1, ...).
ExprPtr simplify(const ExprPtr& e);

}  // namespace carroll
