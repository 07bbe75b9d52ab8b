#pragma once

#include <map>
#include <string>
#include <vector>

#include "carroll/model.hpp"

namespace carroll {

// Constructors for the model gallery. Every preset passes validate
// (tol 1e-8, 128 samples, seed 42) by construction; provenance notes record
// the conventions each one fixes.

// Tangent algebroid of a flat Carroll structure on coordinates
// (x_1..x_{n-1}, t): identity anchor, zero bracket, g = diag(1,..,1,0),
// sigma = e_n. Requires n >= 2.
AlgebroidModel preset_flat_carroll(int n, double bound = 2.0);

// Trivial line bundle over the chart generated by the vector field X:
// k = 1, zero bracket, zero metric, sigma = 1, anchor column = X.
AlgebroidModel preset_vector_field_line(const std::vector<std::string>& X_components,
                                        double bound = 2.0);

// Action algebroid of 2x2 matrices acting linearly on the plane, basis order
// (E11, E12, E21, E22); metric diag(0,1,1,1), sigma = E11. The stored bracket
// is minus the matrix commutator so the anchor is a Lie-algebra homomorphism.
AlgebroidModel preset_action_gl2(double bound = 2.0);

// gl2 over a point with the Killing form K(X,Y) = 4 tr(XY) - 2 tr(X) tr(Y);
// kernel spanned by the identity matrix, sigma = (1,0,0,1).
AlgebroidModel preset_carrollian_lie_algebra_gl2();

// Direct sum of the tangent algebroid with block metric g0 (m x m expression
// entries, row-major, upper triangle authoritative) and a line bundle
// generated by X. Cross structure functions are C^j_{i,sigma} = dX^j/dx^i,
// which makes Jacobi and the anchor-morphism identity hold for non-constant X.
AlgebroidModel preset_direct_sum(const std::vector<std::vector<std::string>>& g0,
                                 const std::vector<std::string>& X_components,
                                 double bound = 2.0);

// Randomized direct-sum model: g0 = I + bounded low-degree polynomial
// perturbation (positive-definite on the chart by a Gershgorin bound), random
// polynomial X. Deterministic in the seed. Requires k == n + 1.
AlgebroidModel preset_random(int k, int n, std::uint64_t seed);

// Named constructor used by the CLI: key=value parameters, unknown names throw
// ModelError listing the available presets.
AlgebroidModel make_preset(const std::string& name,
                           const std::map<std::string, std::string>& params);

std::vector<std::string> preset_names();

// The shipped battery with default parameters, keyed by preset name.
std::vector<std::pair<std::string, AlgebroidModel>> default_preset_battery();

}  // namespace carroll
