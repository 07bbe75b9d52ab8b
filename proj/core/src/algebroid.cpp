#include "carroll/algebroid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carroll/errors.hpp"
#include "carroll/sampling.hpp"

namespace carroll {

namespace {

constexpr double kRankCut = 1e-10;    // relative singular-value cutoff
constexpr double kFrameFloor = 1e-10; // sigma considered vanishing below this

// value + gradient of every structure function, dense with signs applied
struct StructureJets {
  int k = 0, n = 0;
  std::vector<double> val;             // k^3
  std::vector<Eigen::VectorXd> grad;   // k^3
};

StructureJets structure_jets(const AlgebroidModel& m, const Eigen::VectorXd& x) {
  StructureJets out;
  out.k = m.rank;
  out.n = m.dim();
  out.val.assign(static_cast<size_t>(out.k) * out.k * out.k, 0.0);
  out.grad.assign(out.val.size(), Eigen::VectorXd::Zero(out.n));
  for (const auto& s : m.structure) {
    Jet2 j = s.field.jet(x);
    out.val[idx3(s.a, s.b, s.c, out.k)] += j.value;
    out.val[idx3(s.b, s.a, s.c, out.k)] -= j.value;
    out.grad[idx3(s.a, s.b, s.c, out.k)] += j.grad;
    out.grad[idx3(s.b, s.a, s.c, out.k)] -= j.grad;
  }
  return out;
}

}  // namespace

Eigen::VectorXd anchor_of_section(const AlgebroidModel& m, const Section& u,
                                  const Eigen::VectorXd& x) {
  return m.anchor_at(x) * u.value(x);
}

double anchor_apply(const AlgebroidModel& m, const Section& u, const ScalarField& f,
                    const Eigen::VectorXd& x) {
  Jet2 j = f.jet(x);
  return anchor_of_section(m, u, x).dot(j.grad);
}

Eigen::VectorXd bracket_sections(const AlgebroidModel& m, const Section& u, const Section& v,
                                 const Eigen::VectorXd& x) {
  const int k = m.rank;
  if (u.rank() != k || v.rank() != k) throw ModelError("bracket: section rank mismatch");
  Eigen::VectorXd uv = u.value(x), vv = v.value(x);
  std::vector<double> C = m.structure_at(x);
  Eigen::MatrixXd rho = m.anchor_at(x);
  Eigen::VectorXd Xu = rho * uv;  // anchor images
  Eigen::VectorXd Xv = rho * vv;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
  for (int d = 0; d < k; ++d) {
    double s = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) s += uv[a] * vv[b] * C[idx3(a, b, d, k)];
    s += Xu.dot(v.comp[d].jet(x).grad);
    s -= Xv.dot(u.comp[d].jet(x).grad);
    out[d] = s;
  }
  return out;
}

double jacobi_residual(const AlgebroidModel& m, const Eigen::VectorXd& x) {
  const int k = m.rank;
  StructureJets C = structure_jets(m, x);
  Eigen::MatrixXd rho = m.anchor_at(x);

  // one cyclic term of the frame Jacobiator
  auto term = [&](int a, int b, int c, int d) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i) s += rho(i, a) * C.grad[idx3(b, c, d, k)][i];
    for (int e = 0; e < k; ++e) s += C.val[idx3(b, c, e, k)] * C.val[idx3(a, e, d, k)];
    return s;
  };

  double worst = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      for (int c = b + 1; c < k; ++c)
        for (int d = 0; d < k; ++d) {
          double s = term(a, b, c, d) + term(b, c, a, d) + term(c, a, b, d);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

double anchor_morphism_residual(const AlgebroidModel& m, const Eigen::VectorXd& x) {
  const int n = m.dim(), k = m.rank;
  Eigen::MatrixXd rho(n, k);
  std::vector<Eigen::VectorXd> drho(static_cast<size_t>(n) * k);  // gradients
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a) {
      Jet2 j = m.anchor[idx2(i, a, k)].jet(x);
      rho(i, a) = j.value;
      drho[idx2(i, a, k)] = j.grad;
    }
  std::vector<double> C = m.structure_at(x);

  double worst = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          s += rho(j, a) * drho[idx2(i, b, k)][j] - rho(j, b) * drho[idx2(i, a, k)][j];
        for (int c = 0; c < k; ++c) s -= C[idx3(a, b, c, k)] * rho(i, c);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

ValidationReport validate(const AlgebroidModel& m, int samples, std::uint64_t seed, double tol) {
  ValidationReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.tol = tol;
  auto pts = halton_points(m.chart, samples, seed);

  CheckResult jacobi{"jacobi", 0, tol, true, ""};
  CheckResult morphism{"anchor_morphism", 0, tol, true, ""};
  CheckResult gsigma{"metric_kernel_product", 0, tol, true, ""};
  CheckResult rankdef{"metric_rank_defect", 0, 0.5, true,
                      "0 when exactly one singular value <= 1e-10 * largest at every sample"};
  CheckResult nonvanish{"sigma_nonvanishing", 0, 0.5, true, ""};

  double min_sigma_norm = std::numeric_limits<double>::infinity();
  for (const auto& x : pts) {
    try {
      jacobi.residual = std::max(jacobi.residual, jacobi_residual(m, x));
      morphism.residual = std::max(morphism.residual, anchor_morphism_residual(m, x));
      if (m.has_sigma()) {
        Eigen::MatrixXd g = m.metric_at(x);
        Eigen::VectorXd s = m.sigma_at(x);
        gsigma.residual = std::max(gsigma.residual, (g * s).cwiseAbs().maxCoeff());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
        const auto& sv = svd.singularValues();
        int near_zero = 0;
        for (int i = 0; i < sv.size(); ++i)
          if (sv[i] <= kRankCut * sv[0]) ++near_zero;
        if (near_zero != 1) rankdef.residual = 1.0;
        min_sigma_norm = std::min(min_sigma_norm, s.norm());
      } else {
        rankdef.residual = 1.0;
        rankdef.note = "no kernel frame sigma";
        nonvanish.residual = 1.0;
        nonvanish.note = "no kernel frame sigma";
      }
    } catch (const std::exception& e) {
      jacobi.residual = std::numeric_limits<double>::infinity();
      jacobi.note = std::string("evaluation failed: ") + e.what();
    }
  }
  if (m.has_sigma()) {
    if (min_sigma_norm < kFrameFloor) nonvanish.residual = 1.0;
    nonvanish.note = "min |sigma| over samples = " + std::to_string(min_sigma_norm);
  }

  for (CheckResult* c : {&jacobi, &morphism, &gsigma, &rankdef, &nonvanish})
    c->pass = c->residual <= c->tol;
  rep.checks = {jacobi, morphism, gsigma, rankdef, nonvanish};
  return rep;
}

Eigen::MatrixXd lie_derivative_metric(const AlgebroidModel& m, const Section& u,
                                      const Eigen::VectorXd& x) {
  const int n = m.dim(), k = m.rank;
  Eigen::VectorXd uv = u.value(x);
  Eigen::MatrixXd rho = m.anchor_at(x);
  Eigen::VectorXd Xu = rho * uv;
  std::vector<double> C = m.structure_at(x);
  Eigen::MatrixXd g = m.metric_at(x);

  // gradients of metric entries and of the section components
  std::vector<Eigen::VectorXd> dg(static_cast<size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      Eigen::VectorXd gr = m.metric_entry(a, b).jet(x).grad;
      dg[a * k + b] = gr;
      dg[b * k + a] = gr;
    }
  std::vector<Eigen::VectorXd> du(k);
  for (int d = 0; d < k; ++d) du[d] = u.comp[d].jet(x).grad;

  // [u, e_b]^d = u^a C^d_{ab} - rho^i_b d_i u^d
  auto bracket_with_basis = [&](int b, int d) {
    double s = 0.0;
    for (int a = 0; a < k; ++a) s += uv[a] * C[idx3(a, b, d, k)];
    for (int i = 0; i < n; ++i) s -= rho(i, b) * du[d][i];
    return s;
  };

  Eigen::MatrixXd L(k, k);
  for (int b = 0; b < k; ++b)
    for (int c = 0; c < k; ++c) {
      double s = Xu.dot(dg[b * k + c]);
      for (int d = 0; d < k; ++d) {
        s -= bracket_with_basis(b, d) * g(d, c);
        s -= g(b, d) * bracket_with_basis(c, d);
      }
      L(b, c) = s;
    }
  return L;
}

KillingResult is_killing(const AlgebroidModel& m, const Section& u, int samples,
                         std::uint64_t seed, double tol) {
  double worst = 0.0;
  for (const auto& x : halton_points(m.chart, samples, seed))
    worst = std::max(worst, lie_derivative_metric(m, u, x).cwiseAbs().maxCoeff());
  return {worst <= tol, worst};
}

Section sigma_section(const AlgebroidModel& m) {
  if (!m.has_sigma()) throw ModelError("model: no kernel frame sigma");
  return Section{m.sigma};
}

KillingResult is_stationary(const AlgebroidModel& m, int samples, std::uint64_t seed,
                            double tol) {
  return is_killing(m, sigma_section(m), samples, seed, tol);
}

Eigen::VectorXd transverse_part(const Eigen::VectorXd& sigma, const Eigen::VectorXd& v) {
  double nsq = sigma.squaredNorm();
  if (nsq < kFrameFloor * kFrameFloor)
    throw PreconditionError("degenerate frame: |sigma| below 1e-10");
  return v - sigma * (sigma.dot(v) / nsq);
}

SymmetryResult is_infinitesimal_symmetry(const AlgebroidModel& m, const Section& u, int samples,
                                         std::uint64_t seed, double tol) {
  SymmetryResult r;
  Section sig = sigma_section(m);
  for (const auto& x : halton_points(m.chart, samples, seed)) {
    r.killing_residual =
        std::max(r.killing_residual, lie_derivative_metric(m, u, x).cwiseAbs().maxCoeff());
    Eigen::VectorXd w = bracket_sections(m, u, sig, x);
    r.l_preserve_residual =
        std::max(r.l_preserve_residual, transverse_part(m.sigma_at(x), w).norm());
  }
  r.symmetry = r.killing_residual <= tol && r.l_preserve_residual <= tol;
  return r;
}

DualForm default_dual_form(const AlgebroidModel& m) {
  if (!m.has_sigma()) throw ModelError("model: no kernel frame sigma");
  const int k = m.rank, n = m.dim();
  for (const auto& x : halton_points(m.chart, 128, 42))
    if (m.sigma_at(x).norm() < kFrameFloor)
      throw PreconditionError("degenerate frame: |sigma| below 1e-10");
  ScalarField denom = m.sigma[0] * m.sigma[0];
  for (int a = 1; a < k; ++a) denom = denom + m.sigma[a] * m.sigma[a];
  DualForm w;
  w.comp.reserve(k);
  for (int a = 0; a < k; ++a) w.comp.push_back(m.sigma[a] / denom);
  (void)n;
  return w;
}

QuotientMetric quotient_metric(const AlgebroidModel& m, const Eigen::VectorXd& x) {
  const int k = m.rank;
  Eigen::MatrixXd g = m.metric_at(x);
  Eigen::VectorXd s = m.sigma_at(x);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const auto& sv = svd.singularValues();
  int near_zero = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] <= kRankCut * sv[0]) ++near_zero;
  if (near_zero != 1)
    throw ModelError("inconsistent kernel: metric corank at x is not exactly 1");

  // complement representatives: largest-norm columns of I - sigma omega
  double nsq = s.squaredNorm();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(k, k) - (s * s.transpose()) / nsq;
  std::vector<int> cols(k);
  for (int i = 0; i < k; ++i) cols[i] = i;
  std::stable_sort(cols.begin(), cols.end(),
                   [&](int a, int b) { return P.col(a).norm() > P.col(b).norm(); });
  Eigen::MatrixXd B(k, k - 1);
  for (int j = 0; j < k - 1; ++j) B.col(j) = P.col(cols[j]);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k - 1);

  QuotientMetric out;
  out.basis = Q;
  out.gram = Q.transpose() * g * Q;
  out.det = out.gram.determinant();
  if (k > 1 && out.det == 0.0)
    throw ModelError("inconsistent kernel: induced quotient metric is degenerate at x");
  return out;
}

ValidationReport verify_morphism(const std::vector<ScalarField>& phi, const AlgebroidModel& m1,
                                 const AlgebroidModel& m2, int samples, std::uint64_t seed,
                                 double tol) {
  const int k1 = m1.rank, k2 = m2.rank;
  if (!(m1.chart == m2.chart)) throw ModelError("morphism: models must share the chart");
  if (static_cast<int>(phi.size()) != k1 * k2)
    throw ModelError("morphism: phi must have rank2 x rank1 entries");

  // image sections phi(e_a)
  std::vector<Section> image;
  image.reserve(k1);
  for (int a = 0; a < k1; ++a) {
    std::vector<ScalarField> comp;
    comp.reserve(k2);
    for (int c = 0; c < k2; ++c) comp.push_back(phi[idx2(c, a, k1)]);
    image.push_back(Section::from_fields(std::move(comp)));
  }

  ValidationReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.tol = tol;
  CheckResult bracket{"bracket_homomorphism", 0, tol, true, ""};
  CheckResult anchor{"anchor_compatibility", 0, tol, true, ""};
  CheckResult isometry{"isometry", 0, tol, true, ""};
  CheckResult kernel{"kernel_mapping", 0, tol, true, ""};

  for (const auto& x : halton_points(m1.chart, samples, seed)) {
    Eigen::MatrixXd phiv(k2, k1);
    for (int c = 0; c < k2; ++c)
      for (int a = 0; a < k1; ++a) phiv(c, a) = phi[idx2(c, a, k1)].value(x);

    std::vector<double> C1 = m1.structure_at(x);
    for (int a = 0; a < k1; ++a)
      for (int b = a + 1; b < k1; ++b) {
        Eigen::VectorXd lhs = Eigen::VectorXd::Zero(k2);
        for (int c = 0; c < k1; ++c) lhs += C1[idx3(a, b, c, k1)] * phiv.col(c);
        Eigen::VectorXd rhs = bracket_sections(m2, image[a], image[b], x);
        bracket.residual = std::max(bracket.residual, (lhs - rhs).cwiseAbs().maxCoeff());
      }

    Eigen::MatrixXd r1 = m1.anchor_at(x), r2 = m2.anchor_at(x);
    if (m1.dim() > 0)
      anchor.residual =
          std::max(anchor.residual, (r2 * phiv - r1).cwiseAbs().maxCoeff());

    Eigen::MatrixXd g1 = m1.metric_at(x), g2 = m2.metric_at(x);
    isometry.residual = std::max(
        isometry.residual, (phiv.transpose() * g2 * phiv - g1).cwiseAbs().maxCoeff());

    if (m1.has_sigma() && m2.has_sigma()) {
      Eigen::VectorXd w = phiv * m1.sigma_at(x);
      if (w.norm() < kFrameFloor)
        kernel.residual = std::max(kernel.residual, 1.0);
      else
        kernel.residual =
            std::max(kernel.residual, transverse_part(m2.sigma_at(x), w).norm());
    } else {
      kernel.residual = 1.0;
      kernel.note = "kernel frame missing";
    }
  }

  for (CheckResult* c : {&bracket, &anchor, &isometry, &kernel}) c->pass = c->residual <= c->tol;
  rep.checks = {bracket, anchor, isometry, kernel};
  return rep;
}

Eigen::MatrixXd induced_spatial_metric(const AlgebroidModel& m, const Eigen::VectorXd& x) {
  const int n = m.dim(), k = m.rank;

  Eigen::MatrixXd rho = m.anchor_at(x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rho, Eigen::ComputeThinU | Eigen::ComputeThinV);
  int rank_rho = 0;
  if (svd.singularValues().size() > 0)
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > kRankCut * svd.singularValues()[0]) ++rank_rho;
  if (rank_rho < n) throw PreconditionError("transitive");
  if (k != n) throw PreconditionError("rank A = dim M");
  {
    double min_c = std::numeric_limits<double>::infinity();
    double eps = 1e-6 * m.chart.diagonal();
    for (const auto& p : halton_points(m.chart, 128, 42))
      min_c = std::min(min_c, (m.anchor_at(p) * m.sigma_at(p)).norm());
    if (!(min_c >= eps)) throw PreconditionError("L-regular");
  }

  // complement of the Carroll direction in T_x M
  Eigen::VectorXd c = rho * m.sigma_at(x);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - (c * c.transpose()) / c.squaredNorm();
  std::vector<int> cols(n);
  for (int i = 0; i < n; ++i) cols[i] = i;
  std::stable_sort(cols.begin(), cols.end(),
                   [&](int a, int b) { return P.col(a).norm() > P.col(b).norm(); });
  Eigen::MatrixXd B(n, n - 1);
  for (int j = 0; j < n - 1; ++j) B.col(j) = P.col(cols[j]);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::MatrixXd W = qr.householderQ() * Eigen::MatrixXd::Identity(n, n - 1);

  // least-squares preimages through the anchor, then evaluate g
  Eigen::MatrixXd U = rho.colPivHouseholderQr().solve(W);
  Eigen::MatrixXd g = m.metric_at(x);
  Eigen::MatrixXd G = U.transpose() * g * U;
  if (n > 1 && G.determinant() == 0.0)
    throw ModelError("induced spatial metric is degenerate at x");
  return G;
}

}  // namespace carroll
