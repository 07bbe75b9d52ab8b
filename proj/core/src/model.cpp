#include "carroll/model.hpp"

#include "carroll/errors.hpp"

namespace carroll {

int AlgebroidModel::tri_index(int a, int b, int k) {
  // packed upper triangle, row-major: (a,b) with a <= b
  return a * k - a * (a - 1) / 2 + (b - a);
}

const ScalarField& AlgebroidModel::metric_entry(int a, int b) const {
  if (a > b) std::swap(a, b);
  return metric[tri_index(a, b, rank)];
}

void AlgebroidModel::check_structure() const {
  const int n = dim(), k = rank;
  if (k < 1) throw ModelError("model: rank must be >= 1");
  if (static_cast<int>(anchor.size()) != n * k)
    throw ModelError("model: anchor must have dim x rank entries");
  if (static_cast<int>(metric.size()) != k * (k + 1) / 2)
    throw ModelError("model: metric must cover the upper triangle");
  if (!sigma.empty() && static_cast<int>(sigma.size()) != k)
    throw ModelError("model: sigma must have rank entries");
  for (const auto& s : structure) {
    if (s.a < 0 || s.b < 0 || s.c < 0 || s.a >= k || s.b >= k || s.c >= k)
      throw ModelError("model: structure index out of range");
    if (s.a >= s.b)
      throw ModelError("model: structure entries must have a < b (antisymmetry is implied)");
  }
}

Eigen::MatrixXd AlgebroidModel::anchor_at(const Eigen::VectorXd& x) const {
  const int n = dim(), k = rank;
  Eigen::MatrixXd rho(n, k);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a) rho(i, a) = anchor[idx2(i, a, k)].value(x);
  return rho;
}

Eigen::MatrixXd AlgebroidModel::metric_at(const Eigen::VectorXd& x) const {
  const int k = rank;
  Eigen::MatrixXd g(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      double v = metric[tri_index(a, b, k)].value(x);
      g(a, b) = v;
      g(b, a) = v;
    }
  return g;
}

Eigen::VectorXd AlgebroidModel::sigma_at(const Eigen::VectorXd& x) const {
  if (sigma.empty()) throw ModelError("model: no kernel frame sigma");
  Eigen::VectorXd s(rank);
  for (int a = 0; a < rank; ++a) s[a] = sigma[a].value(x);
  return s;
}

std::vector<double> AlgebroidModel::structure_at(const Eigen::VectorXd& x) const {
  const int k = rank;
  std::vector<double> c(static_cast<size_t>(k) * k * k, 0.0);
  for (const auto& s : structure) {
    double v = s.field.value(x);
    c[idx3(s.a, s.b, s.c, k)] += v;
    c[idx3(s.b, s.a, s.c, k)] -= v;
  }
  return c;
}

std::vector<Taylor> AlgebroidModel::anchor_taylor(const Eigen::VectorXd& x, int order) const {
  const int n = dim(), k = rank;
  std::vector<Taylor> rho(static_cast<size_t>(n) * k);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a) rho[idx2(i, a, k)] = anchor[idx2(i, a, k)].taylor(x, order);
  return rho;
}

std::vector<Taylor> AlgebroidModel::metric_taylor(const Eigen::VectorXd& x, int order) const {
  const int k = rank;
  std::vector<Taylor> g(static_cast<size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      Taylor v = metric[tri_index(a, b, k)].taylor(x, order);
      g[a * k + b] = v;
      g[b * k + a] = v;
    }
  return g;
}

std::vector<Taylor> AlgebroidModel::sigma_taylor(const Eigen::VectorXd& x, int order) const {
  if (sigma.empty()) throw ModelError("model: no kernel frame sigma");
  std::vector<Taylor> s(rank);
  for (int a = 0; a < rank; ++a) s[a] = sigma[a].taylor(x, order);
  return s;
}

std::vector<Taylor> AlgebroidModel::structure_taylor(const Eigen::VectorXd& x, int order) const {
  const int k = rank;
  std::vector<Taylor> c(static_cast<size_t>(k) * k * k,
                        Taylor::constant(0.0, dim(), order));
  for (const auto& s : structure) {
    Taylor v = s.field.taylor(x, order);
    c[idx3(s.a, s.b, s.c, k)] += v;
    c[idx3(s.b, s.a, s.c, k)] -= v;
  }
  return c;
}

Section Section::basis(int a, int k, int nvars) {
  std::vector<ScalarField> f;
  f.reserve(k);
  for (int i = 0; i < k; ++i) f.push_back(ScalarField::constant(i == a ? 1.0 : 0.0, nvars));
  return Section{std::move(f)};
}

Section Section::parse(const std::vector<std::string>& texts, const Chart& chart) {
  std::vector<ScalarField> f;
  f.reserve(texts.size());
  for (const auto& t : texts) f.push_back(ScalarField::parse(t, chart));
  return Section{std::move(f)};
}

Eigen::VectorXd Section::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v(rank());
  for (int a = 0; a < rank(); ++a) v[a] = comp[a].value(x);
  return v;
}

std::vector<Taylor> Section::taylor(const Eigen::VectorXd& x, int order) const {
  std::vector<Taylor> v(rank());
  for (int a = 0; a < rank(); ++a) v[a] = comp[a].taylor(x, order);
  return v;
}

Eigen::VectorXd DualForm::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v(static_cast<int>(comp.size()));
  for (size_t a = 0; a < comp.size(); ++a) v[static_cast<int>(a)] = comp[a].value(x);
  return v;
}

std::vector<Taylor> DualForm::taylor(const Eigen::VectorXd& x, int order) const {
  std::vector<Taylor> v(comp.size());
  for (size_t a = 0; a < comp.size(); ++a) v[a] = comp[a].taylor(x, order);
  return v;
}

}  // namespace carroll
