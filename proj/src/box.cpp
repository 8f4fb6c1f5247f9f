#include "mintype/box.hpp"

#include "mintype/error.hpp"

#include <sstream>

namespace mintype {

Box Box::cube(int dim, double lo, double hi) {
  return Box{Vector::Constant(dim, lo), Vector::Constant(dim, hi)};
}

bool Box::contains(const Vector& x, double slack) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
  }
  return true;
}

void Box::check() const {
  if (lo.size() == 0 || lo.size() != hi.size()) {
    raise(ErrorCode::InvalidArgument, "region bounds have mismatched dimensions");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) {
      raise(ErrorCode::InvalidArgument, "region is degenerate along axis " + std::to_string(i));
    }
  }
}

std::string format_vector(const Vector& v) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ", ";
    out << v[i];
  }
  out << ')';
  return out.str();
}

}  // namespace mintype
