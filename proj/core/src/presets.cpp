#include "carroll/presets.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "carroll/errors.hpp"
#include "carroll/sampling.hpp"

namespace carroll {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> coord_names(int n, bool last_is_time) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) names.push_back(Chart::default_coord_name(i, n));
  if (last_is_time && n >= 1) names.back() = "t";
  return names;
}

Chart box(int n, double bound, bool last_is_time = false) {
  return Chart::box(coord_names(n, last_is_time), Eigen::VectorXd::Constant(n, -bound),
                    Eigen::VectorXd::Constant(n, bound));
}

ScalarField cnum(double v, int nvars) { return ScalarField::constant(v, nvars); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

AlgebroidModel preset_flat_carroll(int n, double bound) {
  if (n < 2) throw ModelError("flat-carroll: n must be >= 2");
  AlgebroidModel m;
  m.chart = box(n, bound, /*last_is_time=*/true);
  m.rank = n;
  m.anchor.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) m.anchor.push_back(cnum(i == a ? 1 : 0, n));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) m.metric.push_back(cnum(a == b && a < n - 1 ? 1 : 0, n));
  for (int a = 0; a < n; ++a) m.sigma.push_back(cnum(a == n - 1 ? 1 : 0, n));
  m.preset = "flat-carroll";
  m.params = {{"n", std::to_string(n)}, {"bound", num(bound)}};
  m.notes = {"tangent algebroid of a flat Carroll structure: identity anchor, zero bracket,"
             " metric diag(1,..,1,0), kernel frame sigma = d/dt"};
  m.check_structure();
  return m;
}

AlgebroidModel preset_vector_field_line(const std::vector<std::string>& X_components,
                                        double bound) {
  const int n = static_cast<int>(X_components.size());
  if (n < 1) throw ModelError("vector-field-line: X needs at least one component");
  AlgebroidModel m;
  m.chart = box(n, bound);
  m.rank = 1;
  for (int i = 0; i < n; ++i) m.anchor.push_back(ScalarField::parse(X_components[i], m.chart));
  m.metric.push_back(cnum(0, n));
  m.sigma.push_back(cnum(1, n));
  m.preset = "vector-field-line";
  std::string xs;
  for (int i = 0; i < n; ++i) xs += (i ? "," : "") + X_components[i];
  m.params = {{"X", xs}, {"bound", num(bound)}};
  m.notes = {"trivial line bundle generated by the vector field X = (" + xs + ");"
             " zero metric, bracket [psi, chi] = psi X(chi) - X(psi) chi"};
  m.check_structure();
  return m;
}

namespace {

// structure constants of the 2x2 matrix commutator in basis (E11,E12,E21,E22):
// [e_a, e_b] = sum_c coeff * e_c, listed over a < b
struct ConstEntry { int a, b, c; double v; };
const ConstEntry kGl2Commutator[] = {
    {0, 1, 1, +1},  // [E11,E12] = E12
    {0, 2, 2, -1},  // [E11,E21] = -E21
    {1, 2, 0, +1},  // [E12,E21] = E11 - E22
    {1, 2, 3, -1},
    {1, 3, 1, +1},  // [E12,E22] = E12
    {2, 3, 2, -1},  // [E21,E22] = -E21
};

}  // namespace

AlgebroidModel preset_action_gl2(double bound) {
  AlgebroidModel m;
  m.chart = box(2, bound);
  m.rank = 4;
  // anchor columns (x,0), (y,0), (0,x), (0,y) for E11, E12, E21, E22
  const char* row0[4] = {"x", "y", "0", "0"};
  const char* row1[4] = {"0", "0", "x", "y"};
  for (int a = 0; a < 4; ++a) m.anchor.push_back(ScalarField::parse(row0[a], m.chart));
  for (int a = 0; a < 4; ++a) m.anchor.push_back(ScalarField::parse(row1[a], m.chart));
  // minus the matrix commutator: the fundamental-vector-field map is an
  // anti-homomorphism, the sign flip makes the anchor a homomorphism
  for (const auto& e : kGl2Commutator)
    m.structure.push_back({e.a, e.b, e.c, cnum(-e.v, 2)});
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) m.metric.push_back(cnum(a == b && a >= 1 ? 1 : 0, 2));
  m.sigma = {cnum(1, 2), cnum(0, 2), cnum(0, 2), cnum(0, 2)};
  m.preset = "action-gl2";
  m.params = {{"bound", num(bound)}};
  m.notes = {"linear gl2 action on the plane, basis (E11,E12,E21,E22); bracket stored as"
             " minus the matrix commutator so the anchor is a Lie-algebra homomorphism;"
             " metric beta1*beta2 + gamma1*gamma2 + delta1*delta2, kernel frame E11"};
  m.check_structure();
  return m;
}

AlgebroidModel preset_carrollian_lie_algebra_gl2() {
  AlgebroidModel m;
  m.chart = Chart::point();
  m.rank = 4;
  for (const auto& e : kGl2Commutator) m.structure.push_back({e.a, e.b, e.c, cnum(e.v, 0)});
  // Killing form K(X,Y) = 4 tr(XY) - 2 tr(X) tr(Y) in basis (E11,E12,E21,E22)
  Eigen::Matrix4d K;
  K << 2, 0, 0, -2,
       0, 0, 4,  0,
       0, 4, 0,  0,
      -2, 0, 0,  2;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) m.metric.push_back(cnum(K(a, b), 0));
  m.sigma = {cnum(1, 0), cnum(0, 0), cnum(0, 0), cnum(1, 0)};
  m.preset = "lie-algebra-gl2";
  m.notes = {"gl2 over a point with the Killing form 4 tr(XY) - 2 tr(X) tr(Y); kernel"
             " spanned by the identity matrix; bracket is the plain matrix commutator"};
  m.check_structure();
  return m;
}

AlgebroidModel preset_direct_sum(const std::vector<std::vector<std::string>>& g0,
                                 const std::vector<std::string>& X_components, double bound) {
  const int mdim = static_cast<int>(X_components.size());
  if (mdim < 1) throw ModelError("direct-sum: X needs at least one component");
  if (static_cast<int>(g0.size()) != mdim)
    throw ModelError("direct-sum: g0 must be m x m for m = dim");
  AlgebroidModel m;
  m.chart = box(mdim, bound);
  const int k = mdim + 1;
  m.rank = k;

  std::vector<ScalarField> X;
  X.reserve(mdim);
  for (const auto& s : X_components) X.push_back(ScalarField::parse(s, m.chart));

  // anchor: identity on the tangent block, rho(sigma) = X
  for (int i = 0; i < mdim; ++i) {
    for (int a = 0; a < mdim; ++a) m.anchor.push_back(cnum(i == a ? 1 : 0, mdim));
    m.anchor.push_back(X[i]);
  }

  // cross structure functions [e_i, sigma] = dX^j/dx^i e_j
  for (int i = 0; i < mdim; ++i)
    for (int j = 0; j < mdim; ++j) {
      ScalarField d = X[j].partial(i);
      if (!d.is_literal(0.0)) m.structure.push_back({i, mdim, j, d});
    }

  // metric diag(g0, 0), upper triangle of g0 authoritative
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      if (a < mdim && b < mdim) {
        if (static_cast<int>(g0[a].size()) != mdim)
          throw ModelError("direct-sum: g0 must be m x m for m = dim");
        m.metric.push_back(ScalarField::parse(g0[a][b], m.chart));
      } else {
        m.metric.push_back(cnum(0, mdim));
      }
    }

  for (int a = 0; a < k; ++a) m.sigma.push_back(cnum(a == k - 1 ? 1 : 0, mdim));
  m.direct_sum_block = mdim;

  // g0 must be positive-definite on the chart
  for (const auto& x : halton_points(m.chart, 128, 42)) {
    Eigen::MatrixXd g(mdim, mdim);
    for (int a = 0; a < mdim; ++a)
      for (int b = a; b < mdim; ++b) {
        double v = m.metric[AlgebroidModel::tri_index(a, b, k)].value(x);
        g(a, b) = v;
        g(b, a) = v;
      }
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
      throw ModelError("direct-sum: g0 is not positive-definite on the chart");
  }

  m.preset = "direct-sum";
  std::string xs;
  for (int i = 0; i < mdim; ++i) xs += (i ? "," : "") + X_components[i];
  std::string gs;
  for (int a = 0; a < mdim; ++a) {
    if (a) gs += ";";
    for (int b = 0; b < mdim; ++b) gs += (b ? "," : "") + g0[a][b];
  }
  m.params = {{"X", xs}, {"g0", gs}, {"bound", num(bound)}};
  m.notes = {"tangent block with metric g0 plus a line bundle generated by X = (" + xs + ");"
             " cross structure functions C^j_{i,sigma} = dX^j/dx^i, which is what makes"
             " Jacobi and the anchor-morphism identity hold when X is not constant"};
  m.check_structure();
  return m;
}

AlgebroidModel preset_random(int k, int n, std::uint64_t seed) {
  if (k < 2) throw ModelError("random: k must be >= 2");
  if (k != n + 1) throw ModelError("random: requires k == n + 1 (direct-sum shape)");
  std::mt19937 rng(static_cast<unsigned>(seed));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double bound = 2.0;
  Chart ch = box(n, bound);

  auto rounded = [&](double v, double scale) { return std::round(v * scale * 10000) / 10000; };

  auto random_poly_text = [&](double scale) {
    std::string s = num(rounded(unit(rng), scale));
    for (int i = 0; i < n; ++i) {
      double c = rounded(unit(rng), scale);
      s += " + " + num(c) + "*" + ch.coords()[i];
    }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double c = rounded(unit(rng), scale);
        s += " + " + num(c) + "*" + ch.coords()[i] + "*" + ch.coords()[j];
      }
    return s;
  };

  // perturbation budget: every monomial on [-2,2]^n is bounded by 4, there are
  // 1 + n + n(n+1)/2 of them per entry, and n entries per Gershgorin row
  int terms = 1 + n + n * (n + 1) / 2;
  double scale = 0.4 / (4.0 * terms * n);

  std::vector<std::vector<std::string>> g0(n, std::vector<std::string>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::string p = random_poly_text(scale);
      g0[i][j] = (i == j) ? ("1 + " + p) : p;
      if (i != j) g0[j][i] = g0[i][j];
    }
  std::vector<std::string> X(n);
  for (int i = 0; i < n; ++i) X[i] = random_poly_text(1.0);

  AlgebroidModel m = preset_direct_sum(g0, X, bound);
  m.preset = "random";
  m.params = {{"k", std::to_string(k)}, {"n", std::to_string(n)},
              {"seed", std::to_string(seed)}};
  m.notes = {"seeded direct-sum model: g0 = I + bounded polynomial perturbation"
             " (positive-definite by a Gershgorin budget), random polynomial X"};
  return m;
}

std::vector<std::string> preset_names() {
  return {"flat-carroll", "vector-field-line", "action-gl2", "lie-algebra-gl2",
          "direct-sum", "random"};
}

AlgebroidModel make_preset(const std::string& name,
                           const std::map<std::string, std::string>& params) {
  auto get = [&](const std::string& key, const std::string& fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  double bound = std::stod(get("bound", "2"));

  if (name == "flat-carroll") return preset_flat_carroll(std::stoi(get("n", "3")), bound);
  if (name == "vector-field-line")
    return preset_vector_field_line(split(get("X", "y,0"), ','), bound);
  if (name == "action-gl2") return preset_action_gl2(bound);
  if (name == "lie-algebra-gl2") return preset_carrollian_lie_algebra_gl2();
  if (name == "direct-sum") {
    auto X = split(get("X", "y,0"), ',');
    const int mdim = static_cast<int>(X.size());
    std::vector<std::vector<std::string>> g0;
    std::string gtext = get("g0", "");
    if (gtext.empty()) {
      g0.assign(mdim, std::vector<std::string>(mdim, "0"));
      for (int i = 0; i < mdim; ++i) g0[i][i] = "1";
    } else {
      for (const auto& row : split(gtext, ';')) g0.push_back(split(row, ','));
    }
    return preset_direct_sum(g0, X, bound);
  }
  if (name == "random")
    return preset_random(std::stoi(get("k", "3")), std::stoi(get("n", "2")),
                         std::stoull(get("seed", "7")));

  std::string names;
  for (const auto& p : preset_names()) names += (names.empty() ? "" : ", ") + p;
  throw ModelError("unknown preset '" + name + "'; available: " + names);
}

std::vector<std::pair<std::string, AlgebroidModel>> default_preset_battery() {
  std::vector<std::pair<std::string, AlgebroidModel>> out;
  out.emplace_back("flat-carroll", preset_flat_carroll(3));
  out.emplace_back("vector-field-line", preset_vector_field_line({"y", "0"}));
  out.emplace_back("action-gl2", preset_action_gl2());
  out.emplace_back("lie-algebra-gl2", preset_carrollian_lie_algebra_gl2());
  out.emplace_back("direct-sum",
                   preset_direct_sum({{"1", "0"}, {"0", "1"}}, {"y", "0"}));
  out.emplace_back("random", preset_random(3, 2, 7));
  return out;
}

}  // namespace carroll
