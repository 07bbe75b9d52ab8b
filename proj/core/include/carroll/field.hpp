#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "carroll/chart.hpp"
#include "carroll/expr.hpp"
#include "carroll/taylor.hpp"

namespace carroll {

// Value, gradient, and Hessian of a scalar field at a point. The Hessian is
// symmetric by construction (both triangles come from one series coefficient).
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

// A smooth scalar function of the chart coordinates, backed by an expression
// tree. Immutable after construction; evaluation is pure, so concurrent
// evaluation from many workers is safe.
class ScalarField {
 public:
  ScalarField() : expr_(Expr::make_number(0.0)), nvars_(0) {}

  static ScalarField parse(const std::string& text, const Chart& chart);
  static ScalarField from_expr(ExprPtr e, int nvars) { return ScalarField(std::move(e), nvars); }
  static ScalarField constant(double v, int nvars) {
    return ScalarField(Expr::make_number(v), nvars);
  }

  double value(const Eigen::VectorXd& x) const;
  // Exact-to-arithmetic first and second derivatives via order-2 Taylor
  // carriers (never finite differences).
  Jet2 jet(const Eigen::VectorXd& x) const;
  Taylor taylor(const Eigen::VectorXd& x, int order) const;

  // Symbolic d/dx_i, constant-folded; used when a model stores derivatives of
  // its own data as fields.
  ScalarField partial(int var) const {
    return ScalarField(simplify(derivative(expr_, var)), nvars_);
  }

  const ExprPtr& expr() const { return expr_; }
  int nvars() const { return nvars_; }
  std::string text() const { return to_string(expr_); }

  bool is_literal(double v) const {
    return expr_->kind == Expr::Kind::Number && expr_->number == v;
  }

 private:
  ScalarField(ExprPtr e, int nvars) : expr_(std::move(e)), nvars_(nvars) {}

  ExprPtr expr_;
  int nvars_;
};

// AST combinators for derived fields (dual forms, corrected structure
// functions). All operands must live on the same chart.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator*(double s, const ScalarField& a);

}  // namespace carroll
