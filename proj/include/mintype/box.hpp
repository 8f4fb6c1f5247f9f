#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mintype {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Axis-aligned probe region.
struct Box {
  Vector lo;
  Vector hi;

  static Box cube(int dim, double lo, double hi);
  static Box unit_cell(int dim) { return cube(dim, 0.0, 1.0); }

  int dim() const { return static_cast<int>(lo.size()); }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Vector& x, double slack = 0.0) const;
  // Throws InvalidArgument on mismatched or degenerate extents.
  void check() const;
};

std::string format_vector(const Vector& v);

}  // namespace mintype
