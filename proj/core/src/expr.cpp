#include "carroll/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <optional>

#include "carroll/errors.hpp"

namespace carroll {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Tanh: return "tanh";
  }
  return "?";
}

static std::optional<Func> func_by_name(const std::string& s) {
  static const std::pair<const char*, Func> table[] = {
      {"sin", Func::Sin}, {"cos", Func::Cos},   {"tan", Func::Tan},  {"exp", Func::Exp},
      {"log", Func::Log}, {"sqrt", Func::Sqrt}, {"tanh", Func::Tanh}};
  for (const auto& [name, f] : table)
    if (s == name) return f;
  return std::nullopt;
}

ExprPtr Expr::make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Number;
  e->number = v;
  return e;
}

ExprPtr Expr::make_var(int index, std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->var = index;
  e->var_name = std::move(name);
  return e;
}

ExprPtr Expr::make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Neg;
  e->a = std::move(a);
  return e;
}

ExprPtr Expr::make_binary(Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr Expr::make_pow(ExprPtr base, long long exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->a = std::move(base);
  e->exponent = exponent;
  return e;
}

ExprPtr Expr::make_call(Func f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Call;
  e->func = f;
  e->a = std::move(a);
  return e;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& text, const Chart& chart) : s_(text), chart_(chart) {}

  ExprPtr run() {
    ExprPtr e = expression();
    skip_ws();
    if (pos_ < s_.size()) throw ParseError("unexpected trailing input", static_cast<int>(pos_));
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expression() {
    ExprPtr e = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        e = Expr::make_binary(Expr::Kind::Add, e, term());
      } else if (c == '-') {
        ++pos_;
        e = Expr::make_binary(Expr::Kind::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        e = Expr::make_binary(Expr::Kind::Mul, e, unary());
      } else if (c == '/') {
        ++pos_;
        e = Expr::make_binary(Expr::Kind::Div, e, unary());
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    if (accept('-')) return Expr::make_neg(unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    skip_ws();
    if (accept('^')) {
      int at = static_cast<int>(pos_);
      ExprPtr exp_tree = unary();  // right-associative; may itself be a power
      long long m = fold_integer(exp_tree, at);
      return Expr::make_pow(std::move(base), m);
    }
    return base;
  }

  long long fold_integer(const ExprPtr& e, int at) {
    double v = fold_constant(e, at);
    double r = std::nearbyint(v);
    if (v != r || std::abs(r) > 1e15)
      throw ParseError("exponent must be an integer constant", at);
    return static_cast<long long>(r);
  }

  double fold_constant(const ExprPtr& e, int at) {
    switch (e->kind) {
      case Expr::Kind::Number: return e->number;
      case Expr::Kind::Neg: return -fold_constant(e->a, at);
      case Expr::Kind::Add: return fold_constant(e->a, at) + fold_constant(e->b, at);
      case Expr::Kind::Sub: return fold_constant(e->a, at) - fold_constant(e->b, at);
      case Expr::Kind::Mul: return fold_constant(e->a, at) * fold_constant(e->b, at);
      case Expr::Kind::Div: return fold_constant(e->a, at) / fold_constant(e->b, at);
      case Expr::Kind::Pow:
        return std::pow(fold_constant(e->a, at), static_cast<double>(e->exponent));
      default: throw ParseError("exponent must be a constant integer expression", at);
    }
  }

  ExprPtr atom() {
    char c = peek();
    int at = static_cast<int>(pos_);
    if (c == '(') {
      ++pos_;
      ExprPtr e = expression();
      if (!accept(')')) throw ParseError("expected ')'", static_cast<int>(pos_));
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(at);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier(at);
    throw ParseError("expected a number, identifier, or '('", at);
  }

  ExprPtr number(int at) {
    size_t p = pos_;
    while (p < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p])) || s_[p] == '.')) ++p;
    if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
      size_t q = p + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) ++q;
        p = q;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + p, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + p)
      throw ParseError("malformed number literal", at);
    pos_ = p;
    return Expr::make_number(v);
  }

  ExprPtr identifier(int at) {
    size_t p = pos_;
    while (p < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_'))
      ++p;
    std::string name = s_.substr(pos_, p - pos_);
    pos_ = p;
    if (peek() == '(') {
      auto f = func_by_name(name);
      if (!f) throw ParseError("unknown function '" + name + "'", at);
      ++pos_;  // consume '('
      ExprPtr arg = expression();
      if (!accept(')')) throw ParseError("expected ')'", static_cast<int>(pos_));
      return Expr::make_call(*f, std::move(arg));
    }
    int index = chart_.index_of(name);
    if (index < 0) throw ParseError("unknown identifier '" + name + "'", at);
    return Expr::make_var(index, std::move(name));
  }

  const std::string& s_;
  const Chart& chart_;
  size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(const std::string& text, const Chart& chart) {
  if (text.empty()) throw ParseError("empty expression", 0);
  return Parser(text, chart).run();
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

std::string number_to_string(double v) {
  if (v < 0) return "-" + number_to_string(-v);  // keep literals nonnegative
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// precedence: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atoms 5
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

// `min_prec`: parenthesize when the node binds looser than the context needs.
// `leading_minus_ok`: a negative literal may print bare only where a unary
// minus would also parse.
void print(const Expr& e, int min_prec, std::string& out) {
  int prec = precedence(e);
  bool negative_literal = e.kind == Expr::Kind::Number && e.number < 0;
  bool parens = prec < min_prec || (negative_literal && min_prec > 3);
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::Number: out += number_to_string(e.number); break;
    case Expr::Kind::Var: out += e.var_name; break;
    case Expr::Kind::Neg:
      out += '-';
      print(*e.a, 4, out);
      break;
    case Expr::Kind::Add:
      print(*e.a, 1, out);
      out += " + ";
      print(*e.b, 2, out);
      break;
    case Expr::Kind::Sub:
      print(*e.a, 1, out);
      out += " - ";
      print(*e.b, 2, out);
      break;
    case Expr::Kind::Mul:
      print(*e.a, 2, out);
      out += '*';
      print(*e.b, 3, out);
      break;
    case Expr::Kind::Div:
      print(*e.a, 2, out);
      out += '/';
      print(*e.b, 3, out);
      break;
    case Expr::Kind::Pow:
      print(*e.a, 5, out);
      out += '^';
      if (e.exponent < 0) {
        out += "(-" + std::to_string(-e.exponent) + ")";
      } else {
        out += std::to_string(e.exponent);
      }
      break;
    case Expr::Kind::Call:
      out += func_name(e.func);
      out += '(';
      print(*e.a, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

template <typename T>
double value_part(const T& x);
template <>
double value_part<double>(const double& x) { return x; }
template <>
double value_part<Taylor>(const Taylor& x) { return x.value(); }

template <typename T>
T pow_int_t(const T& b, long long m);
template <>
double pow_int_t<double>(const double& b, long long m) {
  return std::pow(b, static_cast<double>(m));
}
template <>
Taylor pow_int_t<Taylor>(const Taylor& b, long long m) { return pow_int(b, m); }

template <typename T>
T eval_node(const Expr& e, const std::vector<T>& vars) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tan;
  using std::tanh;
  switch (e.kind) {
    case Expr::Kind::Number:
      if constexpr (std::is_same_v<T, double>)
        return e.number;
      else
        return Taylor(e.number);
    case Expr::Kind::Var: return vars[e.var];
    case Expr::Kind::Neg: return -eval_node(*e.a, vars);
    case Expr::Kind::Add: return eval_node(*e.a, vars) + eval_node(*e.b, vars);
    case Expr::Kind::Sub: return eval_node(*e.a, vars) - eval_node(*e.b, vars);
    case Expr::Kind::Mul: return eval_node(*e.a, vars) * eval_node(*e.b, vars);
    case Expr::Kind::Div: {
      T num = eval_node(*e.a, vars);
      T den = eval_node(*e.b, vars);
      if (value_part(den) == 0.0) throw EvalError("division by zero", to_string(e));
      return num / den;
    }
    case Expr::Kind::Pow: {
      T base = eval_node(*e.a, vars);
      if (e.exponent < 0 && value_part(base) == 0.0)
        throw EvalError("zero raised to a negative power", to_string(e));
      return pow_int_t(base, e.exponent);
    }
    case Expr::Kind::Call: {
      T arg = eval_node(*e.a, vars);
      switch (e.func) {
        case Func::Sin: return sin(arg);
        case Func::Cos: return cos(arg);
        case Func::Tan: return tan(arg);
        case Func::Exp: return exp(arg);
        case Func::Log:
          if (value_part(arg) <= 0.0) throw EvalError("log of nonpositive value", to_string(e));
          return log(arg);
        case Func::Sqrt:
          if (value_part(arg) <= 0.0) throw EvalError("sqrt of nonpositive value", to_string(e));
          return sqrt(arg);
        case Func::Tanh: return tanh(arg);
      }
      throw EvalError("unreachable", to_string(e));
    }
  }
  throw EvalError("unreachable", to_string(e));
}

}  // namespace

double eval_value(const Expr& e, const std::vector<double>& vars) {
  return eval_node<double>(e, vars);
}

Taylor eval_taylor(const Expr& e, const std::vector<Taylor>& vars) {
  return eval_node<Taylor>(e, vars);
}

// ---------------------------------------------------------------------------
// Symbolic derivative + simplification
// ---------------------------------------------------------------------------

namespace {

bool is_number(const ExprPtr& e, double v) {
  return e->kind == Expr::Kind::Number && e->number == v;
}

}  // namespace

ExprPtr simplify(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Number:
    case K::Var: return e;
    case K::Neg: {
      ExprPtr a = simplify(e->a);
      if (a->kind == K::Number) return Expr::make_number(-a->number);
      if (a->kind == K::Neg) return a->a;
      return Expr::make_neg(a);
    }
    case K::Add: {
      ExprPtr a = simplify(e->a), b = simplify(e->b);
      if (is_number(a, 0)) return b;
      if (is_number(b, 0)) return a;
      if (a->kind == K::Number && b->kind == K::Number)
        return Expr::make_number(a->number + b->number);
      return Expr::make_binary(K::Add, a, b);
    }
    case K::Sub: {
      ExprPtr a = simplify(e->a), b = simplify(e->b);
      if (is_number(b, 0)) return a;
      if (is_number(a, 0)) return simplify(Expr::make_neg(b));
      if (a->kind == K::Number && b->kind == K::Number)
        return Expr::make_number(a->number - b->number);
      return Expr::make_binary(K::Sub, a, b);
    }
    case K::Mul: {
      ExprPtr a = simplify(e->a), b = simplify(e->b);
      if (is_number(a, 0) || is_number(b, 0)) return Expr::make_number(0);
      if (is_number(a, 1)) return b;
      if (is_number(b, 1)) return a;
      if (a->kind == K::Number && b->kind == K::Number)
        return Expr::make_number(a->number * b->number);
      return Expr::make_binary(K::Mul, a, b);
    }
    case K::Div: {
      ExprPtr a = simplify(e->a), b = simplify(e->b);
      if (is_number(a, 0) && !is_number(b, 0)) return Expr::make_number(0);
      if (is_number(b, 1)) return a;
      if (a->kind == K::Number && b->kind == K::Number && b->number != 0)
        return Expr::make_number(a->number / b->number);
      return Expr::make_binary(K::Div, a, b);
    }
    case K::Pow: {
      ExprPtr a = simplify(e->a);
      if (e->exponent == 0) return Expr::make_number(1);
      if (e->exponent == 1) return a;
      if (a->kind == K::Number)
        return Expr::make_number(std::pow(a->number, static_cast<double>(e->exponent)));
      return Expr::make_pow(a, e->exponent);
    }
    case K::Call: return Expr::make_call(e->func, simplify(e->a));
  }
  return e;
}

ExprPtr derivative(const ExprPtr& e, int var) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Number: return Expr::make_number(0);
    case K::Var: return Expr::make_number(e->var == var ? 1 : 0);
    case K::Neg: return simplify(Expr::make_neg(derivative(e->a, var)));
    case K::Add:
      return simplify(Expr::make_binary(K::Add, derivative(e->a, var), derivative(e->b, var)));
    case K::Sub:
      return simplify(Expr::make_binary(K::Sub, derivative(e->a, var), derivative(e->b, var)));
    case K::Mul: {
      ExprPtr da = derivative(e->a, var), db = derivative(e->b, var);
      return simplify(Expr::make_binary(
          K::Add, Expr::make_binary(K::Mul, da, e->b), Expr::make_binary(K::Mul, e->a, db)));
    }
    case K::Div: {
      // (a/b)' = (a'b - ab') / b^2
      ExprPtr da = derivative(e->a, var), db = derivative(e->b, var);
      ExprPtr num = Expr::make_binary(K::Sub, Expr::make_binary(K::Mul, da, e->b),
                                      Expr::make_binary(K::Mul, e->a, db));
      return simplify(Expr::make_binary(K::Div, num, Expr::make_pow(e->b, 2)));
    }
    case K::Pow: {
      // (a^n)' = n a^(n-1) a'
      ExprPtr da = derivative(e->a, var);
      ExprPtr factor = Expr::make_binary(
          K::Mul, Expr::make_number(static_cast<double>(e->exponent)),
          Expr::make_pow(e->a, e->exponent - 1));
      return simplify(Expr::make_binary(K::Mul, factor, da));
    }
    case K::Call: {
      ExprPtr da = derivative(e->a, var);
      ExprPtr outer;
      switch (e->func) {
        case Func::Sin: outer = Expr::make_call(Func::Cos, e->a); break;
        case Func::Cos: outer = Expr::make_neg(Expr::make_call(Func::Sin, e->a)); break;
        case Func::Tan:
          // 1 + tan^2
          outer = Expr::make_binary(K::Add, Expr::make_number(1),
                                    Expr::make_pow(Expr::make_call(Func::Tan, e->a), 2));
          break;
        case Func::Exp: outer = Expr::make_call(Func::Exp, e->a); break;
        case Func::Log:
          return simplify(Expr::make_binary(K::Div, da, e->a));
        case Func::Sqrt:
          return simplify(Expr::make_binary(
              K::Div, da,
              Expr::make_binary(K::Mul, Expr::make_number(2), Expr::make_call(Func::Sqrt, e->a))));
        case Func::Tanh:
          // 1 - tanh^2
          outer = Expr::make_binary(K::Sub, Expr::make_number(1),
                                    Expr::make_pow(Expr::make_call(Func::Tanh, e->a), 2));
          break;
      }
      return simplify(Expr::make_binary(K::Mul, outer, da));
    }
  }
  return Expr::make_number(0);
}

}  // namespace carroll
