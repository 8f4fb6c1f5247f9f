#pragma once

#include "mintype/convex_family.hpp"

#include <random>

namespace testing_support {

inline mintype::Vector vec(std::initializer_list<double> values) {
  mintype::Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline mintype::Family two_point() { return mintype::Family::point_sites({vec({-1, 0}), vec({1, 0})}); }

inline mintype::Family torus_single() { return mintype::Family::periodic({vec({0, 0})}); }

inline mintype::Vector uniform_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  mintype::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace testing_support
