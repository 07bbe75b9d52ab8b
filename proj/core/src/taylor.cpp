#include "carroll/taylor.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace carroll {

namespace {

// Graded-lexicographic enumeration of multi-indices with |alpha| <= order.
void enumerate(int nvars, int order, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(nvars, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == nvars) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[pos] = e;
      rec(pos + 1, remaining - e);
    }
    cur[pos] = 0;
  };
  if (nvars == 0) {
    out.push_back({});
    return;
  }
  for (int d = 0; d <= order; ++d) rec(0, d);
}

// Divides the j-th derivative list by j! in place.
std::vector<double> normalized(std::vector<double> derivs) {
  double fact = 1.0;
  for (size_t j = 0; j < derivs.size(); ++j) {
    if (j > 1) fact *= static_cast<double>(j);
    derivs[j] /= fact;
  }
  return derivs;
}

}  // namespace

struct Taylor::Table {
  int nvars = 0;
  int order = 0;
  std::vector<std::vector<int>> exps;   // position -> multi-index
  std::map<std::vector<int>, int> pos;  // multi-index -> position
  struct ProdTerm { int i, j, t; };
  std::vector<ProdTerm> prod;           // truncated convolution pairs

  int count() const { return static_cast<int>(exps.size()); }

  int position(const std::vector<int>& e) const {
    auto it = pos.find(e);
    return it == pos.end() ? -1 : it->second;
  }
};

const Taylor::Table& Taylor::table_for(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Table>> registry;
  std::scoped_lock lock(mu);
  auto key = std::make_pair(nvars, order);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;

  auto t = std::make_unique<Table>();
  t->nvars = nvars;
  t->order = order;
  enumerate(nvars, order, t->exps);
  for (int p = 0; p < t->count(); ++p) t->pos[t->exps[p]] = p;
  std::vector<int> sum(nvars);
  for (int i = 0; i < t->count(); ++i) {
    for (int j = 0; j < t->count(); ++j) {
      int deg = 0;
      for (int v = 0; v < nvars; ++v) {
        sum[v] = t->exps[i][v] + t->exps[j][v];
        deg += sum[v];
      }
      if (deg > order) continue;
      t->prod.push_back({i, j, t->pos.at(sum)});
    }
  }
  const Table& ref = *t;
  registry.emplace(key, std::move(t));
  return ref;
}

const Taylor::Table& Taylor::table() const { return table_for(nvars_, order_); }

Taylor Taylor::constant(double v, int nvars, int order) {
  Taylor r;
  r.nvars_ = nvars;
  r.order_ = order;
  r.c_.assign(table_for(nvars, order).count(), 0.0);
  r.c_[0] = v;
  return r;
}

Taylor Taylor::variable(int i, double x, int nvars, int order) {
  Taylor r = constant(x, nvars, order);
  if (order >= 1) {
    if (i < 0 || i >= nvars) throw std::out_of_range("Taylor::variable index");
    r.c_[1 + i] = 1.0;  // degree-1 block follows the constant in graded order
  }
  return r;
}

Eigen::VectorXd Taylor::gradient() const {
  if (order_ < 1) throw std::logic_error("Taylor::gradient needs order >= 1");
  Eigen::VectorXd g(nvars_);
  for (int i = 0; i < nvars_; ++i) g[i] = c_[1 + i];
  return g;
}

Eigen::MatrixXd Taylor::hessian() const {
  if (order_ < 2) throw std::logic_error("Taylor::hessian needs order >= 2");
  const Table& t = table();
  Eigen::MatrixXd h(nvars_, nvars_);
  std::vector<int> e(nvars_, 0);
  for (int i = 0; i < nvars_; ++i) {
    for (int j = i; j < nvars_; ++j) {
      e.assign(nvars_, 0);
      e[i] += 1;
      e[j] += 1;
      double coeff = c_[t.position(e)];
      double v = (i == j) ? 2.0 * coeff : coeff;
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

Taylor Taylor::partial(int i) const {
  if (order_ < 1) throw std::logic_error("Taylor::partial needs order >= 1");
  if (i < 0 || i >= nvars_) throw std::out_of_range("Taylor::partial index");
  const Table& src = table();
  const Table& dst = table_for(nvars_, order_ - 1);
  Taylor r;
  r.nvars_ = nvars_;
  r.order_ = order_ - 1;
  r.c_.assign(dst.count(), 0.0);
  std::vector<int> e(nvars_);
  for (int p = 0; p < dst.count(); ++p) {
    e = dst.exps[p];
    e[i] += 1;
    r.c_[p] = c_[src.position(e)] * static_cast<double>(e[i]);
  }
  return r;
}

Taylor Taylor::truncated(int order) const {
  if (order >= order_) return *this;
  const Table& src = table();
  const Table& dst = table_for(nvars_, order);
  Taylor r;
  r.nvars_ = nvars_;
  r.order_ = order;
  r.c_.assign(dst.count(), 0.0);
  for (int p = 0; p < dst.count(); ++p) r.c_[p] = c_[src.position(dst.exps[p])];
  return r;
}

// Promote scalar-like carriers and truncate to a common order.
void Taylor::align(Taylor& a, Taylor& b) {
  if (a.nvars_ != b.nvars_) {
    if (a.nvars_ == 0)
      a = constant(a.c_[0], b.nvars_, b.order_);
    else if (b.nvars_ == 0)
      b = constant(b.c_[0], a.nvars_, a.order_);
    else
      throw std::logic_error("Taylor: mixing carriers of different dimensions");
  }
  if (a.order_ > b.order_) a = a.truncated(b.order_);
  if (b.order_ > a.order_) b = b.truncated(a.order_);
}

Taylor Taylor::operator-() const {
  Taylor r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Taylor& Taylor::operator+=(const Taylor& o) {
  Taylor b = o;
  align(*this, b);
  for (size_t p = 0; p < c_.size(); ++p) c_[p] += b.c_[p];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  Taylor b = o;
  align(*this, b);
  for (size_t p = 0; p < c_.size(); ++p) c_[p] -= b.c_[p];
  return *this;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  Taylor x = a, y = b;
  Taylor::align(x, y);
  const Taylor::Table& t = x.table();
  Taylor r;
  r.nvars_ = x.nvars_;
  r.order_ = x.order_;
  r.c_.assign(t.count(), 0.0);
  for (const auto& term : t.prod) r.c_[term.t] += x.c_[term.i] * y.c_[term.j];
  return r;
}

Taylor operator*(Taylor a, double s) {
  for (double& v : a.c_) v *= s;
  return a;
}

Taylor operator/(const Taylor& a, const Taylor& b) {
  if (b.value() == 0.0) throw std::domain_error("division by zero");
  if (b.nvars_ == 0) return a * (1.0 / b.value());
  // 1/u has normalized series (-1)^j / u0^{j+1}
  int p = b.order_;
  std::vector<double> fj(p + 1);
  double inv = 1.0 / b.value();
  double acc = inv;
  for (int j = 0; j <= p; ++j) {
    fj[j] = acc;
    acc *= -inv;
  }
  return a * Taylor::compose(b, fj);
}

Taylor operator/(double s, const Taylor& a) { return Taylor(s) / a; }

Taylor Taylor::compose(const Taylor& u, const std::vector<double>& fj) {
  // Horner over the nilpotent part h = u - u0
  Taylor h = u;
  h.c_[0] = 0.0;
  int p = u.order_;
  Taylor out = constant(fj[p], u.nvars_, u.order_);
  for (int j = p - 1; j >= 0; --j) {
    out = out * h;
    out.c_[0] += fj[j];
  }
  return out;
}

Taylor sin(const Taylor& u) {
  if (u.nvars_ == 0) return Taylor(std::sin(u.value()));
  double s = std::sin(u.value()), c = std::cos(u.value());
  std::vector<double> cyc = {s, c, -s, -c};
  std::vector<double> derivs(u.order_ + 1);
  for (int j = 0; j <= u.order_; ++j) derivs[j] = cyc[j % 4];
  return Taylor::compose(u, normalized(std::move(derivs)));
}

Taylor cos(const Taylor& u) {
  if (u.nvars_ == 0) return Taylor(std::cos(u.value()));
  double s = std::sin(u.value()), c = std::cos(u.value());
  std::vector<double> cyc = {c, -s, -c, s};
  std::vector<double> derivs(u.order_ + 1);
  for (int j = 0; j <= u.order_; ++j) derivs[j] = cyc[j % 4];
  return Taylor::compose(u, normalized(std::move(derivs)));
}

Taylor tan(const Taylor& u) {
  double t = std::tan(u.value());
  if (u.nvars_ == 0) return Taylor(t);
  if (u.order_ > 3) throw std::logic_error("Taylor: tan beyond order 3 not implemented");
  double s = 1.0 + t * t;  // sec^2
  std::vector<double> derivs = {t, s, 2.0 * t * s, 2.0 * s * (1.0 + 3.0 * t * t)};
  derivs.resize(u.order_ + 1);
  return Taylor::compose(u, normalized(std::move(derivs)));
}

Taylor exp(const Taylor& u) {
  double e = std::exp(u.value());
  if (u.nvars_ == 0) return Taylor(e);
  std::vector<double> derivs(u.order_ + 1, e);
  return Taylor::compose(u, normalized(std::move(derivs)));
}

Taylor log(const Taylor& u) {
  double v = u.value();
  if (v <= 0.0) throw std::domain_error("log of nonpositive value");
  if (u.nvars_ == 0) return Taylor(std::log(v));
  // normalized coefficients: log(u0), then (-1)^{j-1} / (j u0^j)
  std::vector<double> fj(u.order_ + 1);
  fj[0] = std::log(v);
  double powv = 1.0, sign = 1.0;
  for (int j = 1; j <= u.order_; ++j) {
    powv *= v;
    fj[j] = sign / (j * powv);
    sign = -sign;
  }
  return Taylor::compose(u, fj);
}

Taylor sqrt(const Taylor& u) {
  double v = u.value();
  if (v <= 0.0) throw std::domain_error("sqrt of nonpositive value");
  double s = std::sqrt(v);
  if (u.nvars_ == 0) return Taylor(s);
  if (u.order_ > 3) throw std::logic_error("Taylor: sqrt beyond order 3 not implemented");
  std::vector<double> derivs = {s, 0.5 / s, -0.25 / (s * s * s),
                                0.375 / (s * s * s * s * s)};
  derivs.resize(u.order_ + 1);
  return Taylor::compose(u, normalized(std::move(derivs)));
}

Taylor tanh(const Taylor& u) {
  double h = std::tanh(u.value());
  if (u.nvars_ == 0) return Taylor(h);
  if (u.order_ > 3) throw std::logic_error("Taylor: tanh beyond order 3 not implemented");
  double s = 1.0 - h * h;
  std::vector<double> derivs = {h, s, -2.0 * h * s, -2.0 * s * (1.0 - 3.0 * h * h)};
  derivs.resize(u.order_ + 1);
  return Taylor::compose(u, normalized(std::move(derivs)));
}

Taylor pow_int(const Taylor& u, long long m) {
  if (m == 0) return Taylor::constant(1.0, u.nvars(), u.order());
  if (m < 0) {
    if (u.value() == 0.0) throw std::domain_error("zero raised to a negative power");
    return 1.0 / pow_int(u, -m);
  }
  Taylor base = u;
  Taylor acc = Taylor::constant(1.0, u.nvars(), u.order());
  long long e = m;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

}  // namespace carroll
