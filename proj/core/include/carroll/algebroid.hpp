#pragma once

#include <Eigen/Dense>

#include "carroll/model.hpp"

namespace carroll {

// Frame-level bracket, extended to arbitrary sections by the Leibniz rule:
//   [u,v]^d = u^a v^b C^d_{ab} + rho_u(v^d) - rho_v(u^d),
// with rho_u(f) = u^a rho^i_a df/dx^i. The Leibniz rule holds by construction
// of this formula.
Eigen::VectorXd bracket_sections(const AlgebroidModel& m, const Section& u, const Section& v,
                                 const Eigen::VectorXd& x);

// X^i = rho^i_a u^a.
Eigen::VectorXd anchor_of_section(const AlgebroidModel& m, const Section& u,
                                  const Eigen::VectorXd& x);

// Directional derivative rho_u(f) at x.
double anchor_apply(const AlgebroidModel& m, const Section& u, const ScalarField& f,
                    const Eigen::VectorXd& x);

// max over d and a<b<c of the cyclic frame Jacobiator
//   sum_cyc(a,b,c) [ rho^i_a d_i C^d_{bc} + C^e_{bc} C^d_{ae} ].
double jacobi_residual(const AlgebroidModel& m, const Eigen::VectorXd& x);

// max over i and a<b of | rho^j_a d_j rho^i_b - rho^j_b d_j rho^i_a - C^c_{ab} rho^i_c |.
double anchor_morphism_residual(const AlgebroidModel& m, const Eigen::VectorXd& x);

// Axiom battery at seeded quasi-random interior points: Jacobi, anchor
// morphism, g.sigma = 0, exactly one near-zero singular value of g, sigma
// nowhere vanishing. Evaluation errors are recorded as failed checks.
ValidationReport validate(const AlgebroidModel& m, int samples, std::uint64_t seed, double tol);

// (L_u g)(e_b, e_c) = rho_u(g_bc) - g([u,e_b], e_c) - g(e_b, [u,e_c]).
Eigen::MatrixXd lie_derivative_metric(const AlgebroidModel& m, const Section& u,
                                      const Eigen::VectorXd& x);

struct KillingResult {
  bool killing = false;
  double residual = 0.0;
};
KillingResult is_killing(const AlgebroidModel& m, const Section& u, int samples,
                         std::uint64_t seed, double tol);

// Every section of L is Killing iff the frame sigma is.
KillingResult is_stationary(const AlgebroidModel& m, int samples, std::uint64_t seed, double tol);

struct SymmetryResult {
  bool symmetry = false;
  double killing_residual = 0.0;
  double l_preserve_residual = 0.0;  // transverse part of [u, sigma]
};
SymmetryResult is_infinitesimal_symmetry(const AlgebroidModel& m, const Section& u, int samples,
                                         std::uint64_t seed, double tol);

// The Euclidean-normalized dual form omega_a = sigma_a / sum_b (sigma^b)^2,
// so omega(sigma) = 1 identically. Constructed connections depend on this
// gauge choice. Throws PreconditionError("nonvanishing kernel frame") when
// |sigma| < 1e-10 at a default validation sample.
DualForm default_dual_form(const AlgebroidModel& m);

// Transverse part (I - sigma omega) v at x, with the gauge above.
Eigen::VectorXd transverse_part(const Eigen::VectorXd& sigma, const Eigen::VectorXd& v);

Section sigma_section(const AlgebroidModel& m);

struct QuotientMetric {
  Eigen::MatrixXd gram;   // (k-1) x (k-1)
  double det = 0.0;
  Eigen::MatrixXd basis;  // k x (k-1) complement representatives (orthonormal)
};

// Gram matrix of g on a complement of sigma: the k-1 largest-norm columns of
// (I - sigma omega), orthonormalized. Well-defined on the quotient A/L since
// sigma spans ker g. Throws PreconditionError("kernel rank k-1 at x") when the
// metric does not have corank exactly one at x.
QuotientMetric quotient_metric(const AlgebroidModel& m, const Eigen::VectorXd& x);

// Morphism checks at seeded samples: bracket homomorphism on frame pairs (with
// the Leibniz-corrected formula on image sections), anchor compatibility
// rho2 . phi = rho1, isometry on frame pairs, and kernel mapping (phi sigma1
// parallel to sigma2). phi has k2 x k1 field entries, phi[idx2(c,a,k1)] is the
// e_c-component of phi(e_a).
ValidationReport verify_morphism(const std::vector<ScalarField>& phi, const AlgebroidModel& m1,
                                 const AlgebroidModel& m2, int samples, std::uint64_t seed,
                                 double tol);

// Induced metric on TM/C at x for transitive models with rank A = dim M,
// L-regular on the default validation sample: pulls complement representatives
// back through the anchor and evaluates g on the preimages. Throws
// PreconditionError naming the failed hypothesis ("transitive",
// "rank A = dim M", "L-regular").
Eigen::MatrixXd induced_spatial_metric(const AlgebroidModel& m, const Eigen::VectorXd& x);

}  // namespace carroll
