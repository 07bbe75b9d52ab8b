#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace carroll {

// Bounded coordinate box. All fields of a model live on one chart. n = 0 is
// allowed (Lie algebras over a point); it has no coordinates and a single
// point, the empty vector.
class Chart {
 public:
  Chart() = default;

  // Throws ModelError unless names are distinct valid identifiers and
  // lo[i] < hi[i] for every axis.
  static Chart box(std::vector<std::string> coords, Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Chart point() { return Chart{}; }

  // Symmetric box [-b, b]^n with default coordinate names x, y, z, w, x5, ...
  static Chart symmetric(int dim, double b);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }

  bool contains(const Eigen::VectorXd& x) const;
  double diagonal() const { return dim() == 0 ? 0.0 : (hi_ - lo_).norm(); }
  Eigen::VectorXd center() const { return dim() == 0 ? Eigen::VectorXd(0) : ((lo_ + hi_) / 2).eval(); }

  // Index of a coordinate name, or -1.
  int index_of(const std::string& name) const;

  bool operator==(const Chart& o) const {
    return coords_ == o.coords_ && lo_ == o.lo_ && hi_ == o.hi_;
  }

  static std::string default_coord_name(int i, int dim);

 private:
  std::vector<std::string> coords_;
  Eigen::VectorXd lo_{0}, hi_{0};
};

}  // namespace carroll
