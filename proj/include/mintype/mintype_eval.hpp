#pragma once

#include "mintype/convex_family.hpp"
#include "mintype/tolerances.hpp"

#include <optional>
#include <vector>

namespace mintype {

struct ActiveMember {
  PieceId id;
  double value = 0.0;
  Vector gradient;
};

// Pieces realizing the minimum at a point, within tolerance_used.
struct ActiveSet {
  Vector point;
  double value = 0.0;
  std::vector<ActiveMember> members;
  double tolerance_used = 0.0;

  std::vector<Vector> gradients() const;
  std::size_t size() const { return members.size(); }
  bool contains(const PieceId& id) const;
};

// Pointwise minimum over the locality set at x.
double evaluate_min(const Family& family, const Vector& x);

// tol <= 0 (or absent) selects the relative default from Tolerances.
ActiveSet active_set(const Family& family, const Vector& x, std::optional<double> tol = std::nullopt,
                     const Tolerances& tolerances = {});

// First-order rate of the Min-type function along v: min over members of <g, v>.
double directional_derivative(const ActiveSet& aset, const Vector& v);
double directional_derivative(const std::vector<Vector>& gradients, const Vector& v);

}  // namespace mintype
