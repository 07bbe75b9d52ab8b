#include "carroll/sampling.hpp"

namespace carroll {

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

std::vector<Eigen::VectorXd> halton_points(const Chart& chart, int count, std::uint64_t seed) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  const int n = chart.dim();
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  for (int j = 0; j < count; ++j) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) {
      double u = halton(seed + static_cast<std::uint64_t>(j) + 1, primes[i % 20]);
      x[i] = chart.lo()[i] + u * (chart.hi()[i] - chart.lo()[i]);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace carroll
