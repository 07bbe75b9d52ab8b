#include "carroll/field.hpp"

#include "carroll/errors.hpp"

namespace carroll {

ScalarField ScalarField::parse(const std::string& text, const Chart& chart) {
  return ScalarField(parse_expr(text, chart), chart.dim());
}

double ScalarField::value(const Eigen::VectorXd& x) const {
  std::vector<double> vars(x.data(), x.data() + x.size());
  return eval_value(*expr_, vars);
}

Taylor ScalarField::taylor(const Eigen::VectorXd& x, int order) const {
  std::vector<Taylor> vars;
  vars.reserve(nvars_);
  for (int i = 0; i < nvars_; ++i) vars.push_back(Taylor::variable(i, x[i], nvars_, order));
  Taylor r = eval_taylor(*expr_, vars);
  // a fully constant tree evaluates to a scalar-like carrier; give it shape
  if (r.nvars() != nvars_ || r.order() < order)
    r = Taylor::constant(r.value(), nvars_, order);
  return r;
}

Jet2 ScalarField::jet(const Eigen::VectorXd& x) const {
  Taylor t = taylor(x, 2);
  return Jet2{t.value(), t.gradient(), t.hessian()};
}

namespace {

ScalarField combine(Expr::Kind k, const ScalarField& a, const ScalarField& b) {
  if (a.nvars() != b.nvars()) throw ModelError("field combinator: charts disagree");
  return ScalarField::from_expr(simplify(Expr::make_binary(k, a.expr(), b.expr())), a.nvars());
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return combine(Expr::Kind::Add, a, b);
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return combine(Expr::Kind::Sub, a, b);
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return combine(Expr::Kind::Mul, a, b);
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return combine(Expr::Kind::Div, a, b);
}
ScalarField operator-(const ScalarField& a) {
  return ScalarField::from_expr(simplify(Expr::make_neg(a.expr())), a.nvars());
}
ScalarField operator*(double s, const ScalarField& a) {
  return ScalarField::constant(s, a.nvars()) * a;
}

}  // namespace carroll
