#pragma once

#include "mintype/classifier.hpp"

#include <optional>
#include <vector>

namespace mintype {

struct CriticalPoint {
  Vector location;
  double value = 0.0;
  int index = 0;
  ActiveSet active;
  std::vector<double> certificate;
};

// Point where every piece of a subset takes the same value and a
// nonnegative combination of their gradients vanishes. Such a point is the
// unique minimizer of the pointwise maximum over the subset.
struct SubsetStationaryPoint {
  Vector location;
  std::vector<double> lambda;
  double value = 0.0;
};

// Solves the equal-value stationarity system for the given pieces.
// Equal quadratic coefficients reduce it to a linear system (the equal-value
// loci are bisector hyperplanes); otherwise the maximum of the concave dual
// over the simplex is found and polished by Newton's method on the full
// system. Returns nullopt when no solution with lambda >= 0 exists. Throws
// SingularSystem when the location is not determined.
std::optional<SubsetStationaryPoint> solve_subset_stationary(const std::vector<ConvexQuadratic>& pieces,
                                                             const Tolerances& tol = {});

enum class SubsetMatch {
  // Subset must be exactly the active set at the candidate.
  Exact,
  // Subset must be contained in the active set (non-generic configurations
  // where more than n+1 pieces meet).
  Contained,
};

std::vector<Vector> candidate_points_for_subset(const Family& family, const std::vector<PieceId>& subset,
                                                const Box& region, const Tolerances& tol = {},
                                                SubsetMatch match = SubsetMatch::Exact);

// Every critical point in the region, deduplicated and sorted by value.
// Periodic families are searched over one closed fundamental domain and
// reported in [0,1)^n; the region argument is ignored for them.
std::vector<CriticalPoint> find_all_critical(const Family& family, const Box& region, const Tolerances& tol = {});

}  // namespace mintype
