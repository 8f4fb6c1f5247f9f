#pragma once

#include <algorithm>
#include <cmath>

namespace mintype {

// Numerical thresholds shared by evaluation, classification and search.
// All of them can be overridden from the CLI.
struct Tolerances {
  // Active-set width is active_rel * max(1, |f(x)|).
  double active_rel = 1e-8;
  // Strict positivity / feasibility margin for the linear feasibility tests.
  double feasibility = 1e-9;
  // Relative singular-value cutoff for span rank.
  double rank = 1e-10;
  // A lone active gradient below this norm marks a piece minimizer.
  double zero_gradient = 1e-9;
  // Critical points closer than this are merged.
  double dedup = 1e-7;

  double active_width(double value) const { return active_rel * std::max(1.0, std::abs(value)); }
};

}  // namespace mintype
