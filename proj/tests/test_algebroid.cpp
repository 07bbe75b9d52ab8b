#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <carroll/algebroid.hpp>
#include <carroll/errors.hpp>
#include <carroll/presets.hpp>
#include <carroll/sampling.hpp>
#include <random>

#include "expr_gen.hpp"

using namespace carroll;

namespace {

Eigen::VectorXd pt(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<int>(v.size()));
  int i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

Section const_section(std::initializer_list<double> v, int nvars) {
  std::vector<ScalarField> f;
  for (double e : v) f.push_back(ScalarField::constant(e, nvars));
  return Section::from_fields(std::move(f));
}

// the non-stationary tangent-algebroid testbed: coords (x,t), g = diag(1+t^2, 0)
AlgebroidModel nonstationary_model() {
  AlgebroidModel m;
  m.chart = Chart::box({"x", "t"}, pt({-2, -2}), pt({2, 2}));
  m.rank = 2;
  m.anchor = {ScalarField::constant(1, 2), ScalarField::constant(0, 2),
              ScalarField::constant(0, 2), ScalarField::constant(1, 2)};
  m.metric = {ScalarField::parse("1 + t^2", m.chart), ScalarField::constant(0, 2),
              ScalarField::constant(0, 2)};
  m.sigma = {ScalarField::constant(0, 2), ScalarField::constant(1, 2)};
  m.check_structure();
  return m;
}

// brute-force gl2 Killing matrix from the adjoint representation of the
// preset's own structure constants
Eigen::Matrix4d brute_force_killing(const AlgebroidModel& gl2) {
  Eigen::VectorXd x0(0);
  std::vector<double> C = gl2.structure_at(x0);
  auto ad = [&](int a) {
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) M(c, b) = C[idx3(a, b, c, 4)];
    return M;
  };
  Eigen::Matrix4d K;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) K(a, b) = (ad(a) * ad(b)).trace();
  return K;
}

}  // namespace

TEST_CASE("bracket on the vector-field line algebroid by hand") {
  auto m = preset_vector_field_line({"y", "0"});
  // [1, x] = X(x) = y at (1,2)
  Section u = const_section({1}, 2);
  Section v = Section::from_fields({ScalarField::parse("x", m.chart)});
  Eigen::VectorXd b = bracket_sections(m, u, v, pt({1, 2}));
  CHECK(b[0] == doctest::Approx(2.0));
}

TEST_CASE("bracket is antisymmetric and vanishes on the diagonal") {
  auto m = preset_action_gl2();
  std::mt19937 rng(3);
  for (int t = 0; t < 5; ++t) {
    std::vector<ScalarField> fu, fv;
    for (int a = 0; a < 4; ++a) {
      fu.push_back(testgen::random_polynomial(rng, m.chart));
      fv.push_back(testgen::random_polynomial(rng, m.chart));
    }
    Section u = Section::from_fields(fu), v = Section::from_fields(fv);
    for (const auto& x : halton_points(m.chart, 5, 11 + t)) {
      Eigen::VectorXd uu = bracket_sections(m, u, u, x);
      CHECK(uu.cwiseAbs().maxCoeff() <= 1e-14);
      Eigen::VectorXd uv = bracket_sections(m, u, v, x);
      Eigen::VectorXd vu = bracket_sections(m, v, u, x);
      CHECK((uv + vu).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, uv.norm()));
    }
  }
}

TEST_CASE("gl2 bracket of constant sections matches the matrix commutator") {
  auto m = preset_action_gl2();
  Section e12 = const_section({0, 1, 0, 0}, 2);
  Section e21 = const_section({0, 0, 1, 0}, 2);
  Eigen::VectorXd b = bracket_sections(m, e12, e21, pt({0.3, -0.7}));
  // preset stores minus the commutator, so [E12,E21] evaluates to -(E11 - E22)
  CHECK(b[0] == doctest::Approx(-1.0));
  CHECK(b[1] == doctest::Approx(0.0));
  CHECK(b[2] == doctest::Approx(0.0));
  CHECK(b[3] == doctest::Approx(1.0));
}

TEST_CASE("Leibniz rule holds for random data") {
  auto m = preset_action_gl2();
  std::mt19937 rng(5);
  int checked = 0;
  for (int t = 0; t < 4; ++t) {
    std::vector<ScalarField> fu, fv;
    for (int a = 0; a < 4; ++a) {
      fu.push_back(testgen::random_polynomial(rng, m.chart));
      fv.push_back(testgen::random_polynomial(rng, m.chart));
    }
    Section u = Section::from_fields(fu), v = Section::from_fields(fv);
    ScalarField f = testgen::random_polynomial(rng, m.chart);
    std::vector<ScalarField> fvscaled;
    for (int a = 0; a < 4; ++a) fvscaled.push_back(f * fv[a]);
    Section fv_section = Section::from_fields(fvscaled);

    for (const auto& x : halton_points(m.chart, 25, 100 + t)) {
      Eigen::VectorXd lhs = bracket_sections(m, u, fv_section, x);
      Eigen::VectorXd rhs = anchor_apply(m, u, f, x) * v.value(x) +
                            f.value(x) * bracket_sections(m, u, v, x);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, rhs.norm()));
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("anchors of preset sections") {
  auto flat = preset_flat_carroll(3);
  Eigen::VectorXd a1 = anchor_of_section(flat, Section::basis(0, 3, 3), pt({0.1, 0.2, 0.3}));
  CHECK((a1 - pt({1, 0, 0})).norm() <= 1e-15);

  auto line = preset_vector_field_line({"y", "0"});
  Eigen::VectorXd a2 = anchor_of_section(line, const_section({1}, 2), pt({1, 2}));
  CHECK((a2 - pt({2, 0})).norm() <= 1e-15);

  auto gl2 = preset_action_gl2();
  Eigen::VectorXd a3 = anchor_of_section(gl2, const_section({1, 0, 0, 0}, 2), pt({1, 2}));
  CHECK((a3 - pt({1, 0})).norm() <= 1e-15);
}

TEST_CASE("jacobi residual: exact presets and a corrupted copy") {
  Eigen::VectorXd x0(0);
  auto gl2 = preset_carrollian_lie_algebra_gl2();
  CHECK(jacobi_residual(gl2, x0) <= 1e-12);

  auto action = preset_action_gl2();
  for (const auto& x : halton_points(action.chart, 50, 42))
    CHECK(jacobi_residual(action, x) <= 1e-12);

  // flip one structure-constant sign: the cyclic sum jumps to order one
  auto corrupted = preset_carrollian_lie_algebra_gl2();
  corrupted.structure[0].field = ScalarField::constant(-1.0, 0);
  CHECK(jacobi_residual(corrupted, x0) >= 0.5);
}

TEST_CASE("jacobi vanishes for constant anchors with zero bracket") {
  auto flat = preset_flat_carroll(4);
  for (const auto& x : halton_points(flat.chart, 10, 1))
    CHECK(jacobi_residual(flat, x) == 0.0);
}

TEST_CASE("anchor morphism residual") {
  auto line = preset_vector_field_line({"y", "0"});
  for (const auto& x : halton_points(line.chart, 10, 2))
    CHECK(anchor_morphism_residual(line, x) == 0.0);  // rank one: no pairs

  auto ds = preset_direct_sum({{"1", "0"}, {"0", "1"}}, {"y", "0"});
  for (const auto& x : halton_points(ds.chart, 50, 42))
    CHECK(anchor_morphism_residual(ds, x) <= 1e-12);

  // dropping the corrected cross terms leaves |[d/dy, y d/dx]| = |d/dx| = 1
  auto broken = ds;
  broken.structure.clear();
  for (const auto& x : halton_points(broken.chart, 20, 7))
    CHECK(anchor_morphism_residual(broken, x) == doctest::Approx(1.0));
}

TEST_CASE("validate passes on every shipped preset") {
  for (const auto& [name, model] : default_preset_battery()) {
    ValidationReport rep = validate(model, 128, 42, 1e-8);
    INFO(name);
    CHECK(rep.pass());
    CHECK(rep.max_residual() <= 1e-8);
  }
}

TEST_CASE("validate fails on a nondegenerate metric and on a vanishing frame") {
  auto flat = preset_flat_carroll(3);
  auto broken = flat;
  broken.metric.clear();
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      broken.metric.push_back(ScalarField::constant(a == b ? 1 : 0, 3));
  ValidationReport r1 = validate(broken, 32, 42, 1e-8);
  CHECK_FALSE(r1.pass());
  CHECK_FALSE(r1.find("metric_rank_defect")->pass);

  auto zero_sigma = flat;
  for (auto& s : zero_sigma.sigma) s = ScalarField::constant(0, 3);
  ValidationReport r2 = validate(zero_sigma, 32, 42, 1e-8);
  CHECK_FALSE(r2.pass());
  CHECK_FALSE(r2.find("sigma_nonvanishing")->pass);
}

TEST_CASE("lie derivative of the metric") {
  auto flat = preset_flat_carroll(3);
  Eigen::MatrixXd L = lie_derivative_metric(flat, sigma_section(flat), pt({0.1, 0.2, 0.3}));
  CHECK(L.cwiseAbs().maxCoeff() == 0.0);

  auto ns = nonstationary_model();
  Eigen::MatrixXd L2 = lie_derivative_metric(ns, sigma_section(ns), pt({0.5, 1.0}));
  CHECK(L2(0, 0) == doctest::Approx(2.0));  // d/dt (1 + t^2) = 2t
  L2(0, 0) = 0;
  CHECK(L2.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("killing sections of the flat model") {
  auto flat = preset_flat_carroll(2);  // coords (x, t)
  CHECK(is_killing(flat, Section::basis(0, 2, 2), 64, 42, 1e-10).killing);

  // u = t d/dx is not Killing: (L_u g)(d/dt, d/dx) = 1
  Section u = Section::from_fields(
      {ScalarField::parse("t", flat.chart), ScalarField::constant(0, 2)});
  auto r = is_killing(flat, u, 64, 42, 1e-10);
  CHECK_FALSE(r.killing);
  CHECK(r.residual == doctest::Approx(1.0));

  auto ns = nonstationary_model();
  auto r2 = is_killing(ns, sigma_section(ns), 64, 42, 1e-10);
  CHECK_FALSE(r2.killing);
}

TEST_CASE("killing propagation from the frame to f sigma") {
  std::mt19937 rng(17);
  for (const auto& [name, model] :
       {std::pair<std::string, AlgebroidModel>{"flat", preset_flat_carroll(3)},
        {"line", preset_vector_field_line({"y", "0"})},
        {"gl2-algebra", preset_carrollian_lie_algebra_gl2()}}) {
    INFO(name);
    REQUIRE(is_killing(model, sigma_section(model), 64, 42, 1e-10).killing);
    for (int t = 0; t < 10; ++t) {
      ScalarField f = testgen::random_polynomial(rng, model.chart);
      std::vector<ScalarField> comp;
      for (int a = 0; a < model.rank; ++a) comp.push_back(f * model.sigma[a]);
      auto r = is_killing(model, Section::from_fields(comp), 64, 42, 1e-9);
      CHECK(r.killing);
    }
  }
}

TEST_CASE("stationarity per preset") {
  CHECK(is_stationary(preset_flat_carroll(3), 64, 42, 1e-10).killing);
  CHECK(is_stationary(preset_vector_field_line({"y", "0"}), 64, 42, 1e-10).killing);
  CHECK(is_stationary(preset_carrollian_lie_algebra_gl2(), 8, 42, 1e-10).killing);
  CHECK_FALSE(is_stationary(nonstationary_model(), 64, 42, 1e-10).killing);
}

TEST_CASE("infinitesimal symmetries of the flat model") {
  auto flat = preset_flat_carroll(2);
  CHECK(is_infinitesimal_symmetry(flat, sigma_section(flat), 64, 42, 1e-10).symmetry);
  CHECK(is_infinitesimal_symmetry(flat, Section::basis(0, 2, 2), 64, 42, 1e-10).symmetry);
  Section u = Section::from_fields(
      {ScalarField::parse("t", flat.chart), ScalarField::constant(0, 2)});
  auto r = is_infinitesimal_symmetry(flat, u, 64, 42, 1e-10);
  CHECK_FALSE(r.symmetry);
  CHECK(r.killing_residual == doctest::Approx(1.0));
}

TEST_CASE("default dual form") {
  // sigma = (0,0,1) gives omega = (0,0,1); sigma = (3,4) gives (0.12, 0.16)
  auto flat = preset_flat_carroll(3);
  DualForm w = default_dual_form(flat);
  Eigen::VectorXd wv = w.value(pt({0.1, 0.2, 0.3}));
  CHECK((wv - pt({0, 0, 1})).norm() <= 1e-15);

  AlgebroidModel m = flat;
  m.sigma = {ScalarField::constant(3, 3), ScalarField::constant(4, 3),
             ScalarField::constant(0, 3)};
  // metric no longer annihilates this sigma, but the dual form only needs sigma
  DualForm w2 = default_dual_form(m);
  Eigen::VectorXd w2v = w2.value(pt({0, 0, 0}));
  CHECK(w2v[0] == doctest::Approx(0.12));
  CHECK(w2v[1] == doctest::Approx(0.16));

  // omega(sigma) = 1 at every sample, for a position-dependent frame too
  AlgebroidModel vf = preset_vector_field_line({"y", "0"});
  vf.sigma = {ScalarField::parse("2 + sin(x)", vf.chart)};
  DualForm w3 = default_dual_form(vf);
  for (const auto& x : halton_points(vf.chart, 64, 42))
    CHECK(w3.value(x).dot(vf.sigma_at(x)) == doctest::Approx(1.0).epsilon(1e-12));

  auto degenerate = flat;
  for (auto& s : degenerate.sigma) s = ScalarField::constant(0, 3);
  CHECK_THROWS_AS(default_dual_form(degenerate), PreconditionError);
}

TEST_CASE("quotient metric of the flat model is the identity") {
  auto flat = preset_flat_carroll(3);
  QuotientMetric q = quotient_metric(flat, pt({0.3, -0.4, 0.9}));
  CHECK((q.gram - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(q.det == doctest::Approx(1.0));
}

TEST_CASE("quotient metric of the gl2 Killing algebra") {
  auto gl2 = preset_carrollian_lie_algebra_gl2();
  Eigen::VectorXd x0(0);
  QuotientMetric q = quotient_metric(gl2, x0);
  CHECK(std::abs(q.det) > 1e-6);

  // congruent to the brute-force Killing form restricted to the complement
  Eigen::Matrix4d K = brute_force_killing(gl2);
  Eigen::MatrixXd expected = q.basis.transpose() * K * q.basis;
  CHECK((q.gram - expected).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("quotient metric is invariant under kernel shifts of representatives") {
  auto gl2 = preset_carrollian_lie_algebra_gl2();
  Eigen::VectorXd x0(0);
  QuotientMetric q = quotient_metric(gl2, x0);
  Eigen::VectorXd s = gl2.sigma_at(x0);
  Eigen::MatrixXd g = gl2.metric_at(x0);

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-2, 2);
  Eigen::MatrixXd B2 = q.basis;
  for (int j = 0; j < B2.cols(); ++j) B2.col(j) += dist(rng) * s;
  Eigen::MatrixXd gram2 = B2.transpose() * g * B2;
  CHECK((gram2 - q.gram).cwiseAbs().maxCoeff() <= 1e-10);

  // and under a change of complement basis, after the congruence transform
  Eigen::MatrixXd S = Eigen::MatrixXd::Random(B2.cols(), B2.cols()) +
                      3 * Eigen::MatrixXd::Identity(B2.cols(), B2.cols());
  Eigen::MatrixXd B3 = q.basis * S;
  Eigen::MatrixXd gram3 = B3.transpose() * g * B3;
  CHECK((gram3 - S.transpose() * q.gram * S).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("quotient metric rejects an inconsistent kernel") {
  auto flat = preset_flat_carroll(3);
  auto broken = flat;
  broken.metric.clear();
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      broken.metric.push_back(ScalarField::constant(a == b ? 1 : 0, 3));
  CHECK_THROWS_AS(quotient_metric(broken, pt({0, 0, 0})), ModelError);
}

TEST_CASE("morphism: identity passes on every preset with a frame") {
  for (const auto& [name, model] : default_preset_battery()) {
    INFO(name);
    std::vector<ScalarField> phi;
    for (int c = 0; c < model.rank; ++c)
      for (int a = 0; a < model.rank; ++a)
        phi.push_back(ScalarField::constant(c == a ? 1 : 0, model.dim()));
    ValidationReport rep = verify_morphism(phi, model, model, 16, 42, 1e-10);
    CHECK(rep.pass());
  }
}

TEST_CASE("morphism: scaling the frame breaks anchor compatibility") {
  auto flat = preset_flat_carroll(3);
  std::vector<ScalarField> phi;
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a) {
      double v = (c == a) ? (a == 2 ? 2.0 : 1.0) : 0.0;  // sigma -> 2 sigma
      phi.push_back(ScalarField::constant(v, 3));
    }
  ValidationReport rep = verify_morphism(phi, flat, flat, 16, 42, 1e-10);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.find("anchor_compatibility")->pass);
  CHECK(rep.find("kernel_mapping")->pass);  // still parallel to sigma
}

namespace {

// phi(xi) = P xi P^{-1} as a 4x4 matrix in the basis (E11,E12,E21,E22)
Eigen::Matrix4d conjugation_matrix(const Eigen::Matrix2d& P) {
  Eigen::Matrix2d Pi = P.inverse();
  Eigen::Matrix4d M;
  auto basis = [](int a) {
    Eigen::Matrix2d E = Eigen::Matrix2d::Zero();
    E(a / 2, a % 2) = 1;
    return E;
  };
  for (int a = 0; a < 4; ++a) {
    Eigen::Matrix2d img = P * basis(a) * Pi;
    M(0, a) = img(0, 0);
    M(1, a) = img(0, 1);
    M(2, a) = img(1, 0);
    M(3, a) = img(1, 1);
  }
  return M;
}

std::vector<ScalarField> constant_map(const Eigen::Matrix4d& M) {
  std::vector<ScalarField> phi;
  for (int c = 0; c < 4; ++c)
    for (int a = 0; a < 4; ++a) phi.push_back(ScalarField::constant(M(c, a), 0));
  return phi;
}

}  // namespace

TEST_CASE("morphism: conjugation preserves the Killing algebra structure") {
  auto gl2 = preset_carrollian_lie_algebra_gl2();
  Eigen::Matrix2d P;
  P << 2, 1, 1, 1;
  Eigen::Matrix4d M = conjugation_matrix(P);
  ValidationReport rep = verify_morphism(constant_map(M), gl2, gl2, 4, 42, 1e-10);
  CHECK(rep.pass());

  // composition of two verified morphisms verifies as well
  Eigen::Matrix2d Q;
  Q << 1, -1, 0, 2;
  Eigen::Matrix4d MQ = conjugation_matrix(Q);
  REQUIRE(verify_morphism(constant_map(MQ), gl2, gl2, 4, 42, 1e-10).pass());
  ValidationReport composed = verify_morphism(constant_map(MQ * M), gl2, gl2, 4, 42, 1e-9);
  CHECK(composed.pass());
}

TEST_CASE("induced spatial metric: flat identity and named precondition errors") {
  auto flat = preset_flat_carroll(3);
  Eigen::MatrixXd G = induced_spatial_metric(flat, pt({0.2, -0.3, 0.5}));
  CHECK((G - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

  auto ds = preset_direct_sum({{"1", "0"}, {"0", "1"}}, {"1", "0"});
  try {
    induced_spatial_metric(ds, pt({0, 0}));
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(e.hypothesis() == std::string("rank A = dim M"));
  }

  auto line = preset_vector_field_line({"y", "0"});
  try {
    induced_spatial_metric(line, pt({0, 1}));
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(e.hypothesis() == std::string("transitive"));
  }
}

TEST_CASE("random presets are deterministic in the seed") {
  auto a = preset_random(3, 2, 9);
  auto b = preset_random(3, 2, 9);
  REQUIRE(a.metric.size() == b.metric.size());
  for (size_t i = 0; i < a.metric.size(); ++i) CHECK(a.metric[i].text() == b.metric[i].text());
  for (size_t i = 0; i < a.anchor.size(); ++i) CHECK(a.anchor[i].text() == b.anchor[i].text());
  CHECK(validate(a, 128, 42, 1e-8).pass());
}
