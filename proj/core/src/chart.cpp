#include "carroll/chart.hpp"

#include <cctype>
#include <set>

#include "carroll/errors.hpp"

namespace carroll {

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return true;
}

}  // namespace

Chart Chart::box(std::vector<std::string> coords, Eigen::VectorXd lo, Eigen::VectorXd hi) {
  const int n = static_cast<int>(coords.size());
  if (lo.size() != n || hi.size() != n)
    throw ModelError("chart: coords/lo/hi lengths disagree");
  std::set<std::string> seen;
  for (const auto& name : coords) {
    if (!valid_identifier(name)) throw ModelError("chart: invalid coordinate name '" + name + "'");
    if (!seen.insert(name).second)
      throw ModelError("chart: duplicate coordinate name '" + name + "'");
  }
  for (int i = 0; i < n; ++i)
    if (!(lo[i] < hi[i]))
      throw ModelError("chart: bounds not strictly ordered on coordinate '" + coords[i] + "'");
  Chart c;
  c.coords_ = std::move(coords);
  c.lo_ = std::move(lo);
  c.hi_ = std::move(hi);
  return c;
}

std::string Chart::default_coord_name(int i, int dim) {
  static const char* first[4] = {"x", "y", "z", "w"};
  (void)dim;
  if (i < 4) return first[i];
  return "x" + std::to_string(i + 1);
}

Chart Chart::symmetric(int dim, double b) {
  std::vector<std::string> names;
  names.reserve(dim);
  for (int i = 0; i < dim; ++i) names.push_back(default_coord_name(i, dim));
  return box(std::move(names), Eigen::VectorXd::Constant(dim, -b),
             Eigen::VectorXd::Constant(dim, b));
}

bool Chart::contains(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
  return true;
}

int Chart::index_of(const std::string& name) const {
  for (size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace carroll
