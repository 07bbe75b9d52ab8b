#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carroll/chart.hpp"
#include "carroll/field.hpp"

namespace carroll {

inline int idx2(int i, int a, int k) { return i * k + a; }
inline int idx3(int a, int b, int c, int k) { return (a * k + b) * k + c; }
inline int idx4(int a, int b, int c, int d, int k) { return ((a * k + b) * k + c) * k + d; }

// One stored structure function: the e_c coefficient of [e_a, e_b], kept for
// a < b only. The a > b values are realized with a sign flip on access, so the
// antisymmetry C^c_{ab} = -C^c_{ba} holds exactly by storage convention.
struct StructureEntry {
  int a = 0, b = 0, c = 0;
  ScalarField field;
};

// Frame-level data of a Carrollian Lie algebroid over a chart: anchor matrix
// rho^i_a, structure functions C^c_{ab}, degenerate metric g_{ab} (upper
// triangle authoritative), and the kernel frame sigma. sigma may be empty for
// plain semi-Riemannian test models (nondegenerate metric, no Carroll
// structure); every operation that needs the frame says so.
//
// Models are immutable after load in normal use; all operations on them are
// pure.
class AlgebroidModel {
 public:
  Chart chart;
  int rank = 0;                           // k
  std::vector<ScalarField> anchor;        // n*k entries, anchor[idx2(i,a,k)] = rho^i_a
  std::vector<StructureEntry> structure;  // sparse, a < b
  std::vector<ScalarField> metric;        // packed upper triangle, see tri_index
  std::vector<ScalarField> sigma;         // k entries or empty

  // provenance
  std::string preset;
  std::map<std::string, std::string> params;
  std::vector<std::string> notes;
  // set when the model is a direct sum of an m-dim tangent block and a line
  // bundle (enables the block-form connection construction)
  std::optional<int> direct_sum_block;

  int dim() const { return chart.dim(); }

  static int tri_index(int a, int b, int k);  // a <= b
  const ScalarField& metric_entry(int a, int b) const;

  bool has_sigma() const { return !sigma.empty(); }

  // Throws ModelError on dimension/index inconsistencies.
  void check_structure() const;

  // Dense pointwise evaluation.
  Eigen::MatrixXd anchor_at(const Eigen::VectorXd& x) const;  // n x k
  Eigen::MatrixXd metric_at(const Eigen::VectorXd& x) const;  // k x k, symmetric
  Eigen::VectorXd sigma_at(const Eigen::VectorXd& x) const;
  std::vector<double> structure_at(const Eigen::VectorXd& x) const;  // k^3, idx3(a,b,c)

  // Carrier-level evaluation, same layouts.
  std::vector<Taylor> anchor_taylor(const Eigen::VectorXd& x, int order) const;
  std::vector<Taylor> metric_taylor(const Eigen::VectorXd& x, int order) const;
  std::vector<Taylor> sigma_taylor(const Eigen::VectorXd& x, int order) const;
  std::vector<Taylor> structure_taylor(const Eigen::VectorXd& x, int order) const;
};

// A section of the algebroid: k scalar-field components in the frame.
struct Section {
  std::vector<ScalarField> comp;

  static Section basis(int a, int k, int nvars);
  static Section from_fields(std::vector<ScalarField> fields) { return Section{std::move(fields)}; }
  static Section parse(const std::vector<std::string>& texts, const Chart& chart);

  int rank() const { return static_cast<int>(comp.size()); }
  Eigen::VectorXd value(const Eigen::VectorXd& x) const;
  std::vector<Taylor> taylor(const Eigen::VectorXd& x, int order) const;
};

// A dual section; the canonical one satisfies omega(sigma) = 1 identically.
struct DualForm {
  std::vector<ScalarField> comp;

  Eigen::VectorXd value(const Eigen::VectorXd& x) const;
  std::vector<Taylor> taylor(const Eigen::VectorXd& x, int order) const;
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  double max_residual() const {
    double r = 0.0;
    for (const auto& c : checks) r = std::max(r, c.residual);
    return r;
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

}  // namespace carroll
