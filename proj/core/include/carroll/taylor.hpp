#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace carroll {

// Truncated multivariate Taylor expansion around an evaluation point:
// coefficients c_alpha for all multi-indices |alpha| <= order in nvars
// variables. Arithmetic is exact truncated-series arithmetic, so value, first,
// and second derivatives extracted from a propagated carrier are exact to
// rounding. partial() differentiates the series and drops the order by one;
// that is what makes curvature and Bianchi computations of solver-built
// connections well-defined.
//
// Binary operations between carriers of different orders truncate to the lower
// order. A carrier with nvars == 0 acts as a plain constant and broadcasts
// against any shape.
class Taylor {
 public:
  Taylor() : Taylor(0.0) {}
  explicit Taylor(double v) : nvars_(0), order_(0), c_(1, v) {}

  static Taylor constant(double v, int nvars, int order);
  // Seeds x_i + dx_i (the identity function of variable i).
  static Taylor variable(int i, double x, int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }

  double value() const { return c_[0]; }
  // Requires order >= 1.
  Eigen::VectorXd gradient() const;
  // Requires order >= 2. Symmetric by construction.
  Eigen::MatrixXd hessian() const;

  // d/dx_i of the truncated series; order drops by one. Requires order >= 1.
  Taylor partial(int i) const;

  Taylor truncated(int order) const;

  Taylor operator-() const;
  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor operator/(const Taylor& a, const Taylor& b);

  friend Taylor operator+(Taylor a, double s) { a.c_[0] += s; return a; }
  friend Taylor operator+(double s, Taylor a) { a.c_[0] += s; return a; }
  friend Taylor operator-(Taylor a, double s) { a.c_[0] -= s; return a; }
  friend Taylor operator-(double s, const Taylor& a) { return -a + s; }
  friend Taylor operator*(Taylor a, double s);
  friend Taylor operator*(double s, Taylor a) { return std::move(a) * s; }
  friend Taylor operator/(Taylor a, double s) { return std::move(a) * (1.0 / s); }
  friend Taylor operator/(double s, const Taylor& a);

  // Elementary functions; compose the univariate Taylor series of f at the
  // value part with the higher-order part (Horner over truncated products).
  // Domain preconditions (log/sqrt argument > 0, reciprocal of nonzero) are
  // the caller's: these throw std::domain_error with the operation name, and
  // the expression evaluator converts that into an EvalError with the
  // offending subexpression.
  friend Taylor sin(const Taylor& u);
  friend Taylor cos(const Taylor& u);
  friend Taylor tan(const Taylor& u);
  friend Taylor exp(const Taylor& u);
  friend Taylor log(const Taylor& u);
  friend Taylor sqrt(const Taylor& u);
  friend Taylor tanh(const Taylor& u);
  friend Taylor pow_int(const Taylor& u, long long m);

 private:
  struct Table;  // shared multi-index table per (nvars, order)
  const Table& table() const;
  static const Table& table_for(int nvars, int order);
  // Applies f with normalized series coefficients fj[j] = f^(j)(u0)/j!.
  static Taylor compose(const Taylor& u, const std::vector<double>& fj);
  static void align(Taylor& a, Taylor& b);

  int nvars_;
  int order_;
  std::vector<double> c_;
};

}  // namespace carroll
