#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <carroll/taylor.hpp>
#include <cmath>
#include <random>

using carroll::Taylor;

namespace {

// independent oracle: central differences on a plain double-valued callable
template <typename F>
double fd_grad(F f, std::vector<double> x, int i, double h) {
  auto xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (f(xp) - f(xm)) / (2 * h);
}

template <typename F>
double fd_hess(F f, std::vector<double> x, int i, int j, double h) {
  auto a = x, b = x, c = x, d = x;
  a[i] += h; a[j] += h;
  b[i] += h; b[j] -= h;
  c[i] -= h; c[j] += h;
  d[i] -= h; d[j] -= h;
  return (f(a) - f(b) - f(c) + f(d)) / (4 * h * h);
}

}  // namespace

TEST_CASE("seeded variables carry identity derivatives") {
  Taylor x = Taylor::variable(0, 2.0, 2, 2);
  Taylor y = Taylor::variable(1, 3.0, 2, 2);
  Taylor f = x * y;
  CHECK(f.value() == doctest::Approx(6.0));
  CHECK(f.gradient()[0] == doctest::Approx(3.0));
  CHECK(f.gradient()[1] == doctest::Approx(2.0));
  CHECK(f.hessian()(0, 1) == doctest::Approx(1.0));
  CHECK(f.hessian()(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("product and chain rules match central differences") {
  auto f = [](const std::vector<double>& v) {
    return std::sin(v[0]) * std::exp(0.3 * v[1]) + v[1] / (2.0 + std::cos(v[0])) +
           std::sqrt(1.5 + v[0] * v[0]) * std::tanh(v[1]) + std::log(2.0 + v[0]) +
           std::tan(0.3 * v[0]);
  };
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p = {dist(rng), dist(rng)};
    Taylor x = Taylor::variable(0, p[0], 2, 2);
    Taylor y = Taylor::variable(1, p[1], 2, 2);
    Taylor g = sin(x) * exp(0.3 * y) + y / (2.0 + cos(x)) +
               sqrt(1.5 + x * x) * tanh(y) + log(2.0 + x) + tan(0.3 * x);
    CHECK(g.value() == doctest::Approx(f(p)).epsilon(1e-12));
    for (int i = 0; i < 2; ++i)
      CHECK(g.gradient()[i] == doctest::Approx(fd_grad(f, p, i, 1e-6)).epsilon(1e-6));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(g.hessian()(i, j) == doctest::Approx(fd_hess(f, p, i, j, 1e-4)).epsilon(1e-4));
  }
}

TEST_CASE("third-order coefficients survive one partial") {
  // f = x^3: partial in x at order 3 gives 3x^2 with correct jet
  Taylor x = Taylor::variable(0, 1.5, 1, 3);
  Taylor f = pow_int(x, 3);
  Taylor df = f.partial(0);
  CHECK(df.order() == 2);
  CHECK(df.value() == doctest::Approx(3 * 1.5 * 1.5));
  CHECK(df.gradient()[0] == doctest::Approx(6 * 1.5));
  CHECK(df.hessian()(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("division and negative powers agree") {
  Taylor x = Taylor::variable(0, 0.7, 1, 2);
  Taylor a = 1.0 / (1.0 + x * x);
  Taylor b = pow_int(1.0 + x * x, -1);
  CHECK(a.value() == doctest::Approx(b.value()).epsilon(1e-14));
  CHECK(a.gradient()[0] == doctest::Approx(b.gradient()[0]).epsilon(1e-13));
  CHECK(a.hessian()(0, 0) == doctest::Approx(b.hessian()(0, 0)).epsilon(1e-13));
}

TEST_CASE("scalar-like carriers broadcast") {
  Taylor x = Taylor::variable(0, 2.0, 2, 2);
  Taylor c(5.0);
  Taylor f = c * x + c;
  CHECK(f.value() == doctest::Approx(15.0));
  CHECK(f.gradient()[0] == doctest::Approx(5.0));
}

TEST_CASE("domain errors throw") {
  Taylor x = Taylor::variable(0, -1.0, 1, 2);
  CHECK_THROWS_AS((void)log(x), std::domain_error);
  CHECK_THROWS_AS((void)sqrt(x), std::domain_error);
  Taylor z = Taylor::variable(0, 0.0, 1, 2);
  CHECK_THROWS_AS((void)(1.0 / z), std::domain_error);
  CHECK_THROWS_AS((void)pow_int(z, -2), std::domain_error);
}

TEST_CASE("zero-dimensional carriers behave as constants") {
  Taylor c = Taylor::constant(4.0, 0, 2);
  CHECK(c.value() == 4.0);
  CHECK(c.gradient().size() == 0);
  CHECK(c.hessian().rows() == 0);
}
