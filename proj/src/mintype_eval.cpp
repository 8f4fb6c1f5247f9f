#include "mintype/mintype_eval.hpp"

#include <algorithm>
#include <limits>

namespace mintype {

std::vector<Vector> ActiveSet::gradients() const {
  std::vector<Vector> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.gradient);
  return out;
}

bool ActiveSet::contains(const PieceId& id) const {
  return std::any_of(members.begin(), members.end(), [&](const ActiveMember& m) { return m.id == id; });
}

double evaluate_min(const Family& family, const Vector& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& id : family.local_pieces(x)) best = std::min(best, family.piece(id).value(x));
  return best;
}

ActiveSet active_set(const Family& family, const Vector& x, std::optional<double> tol,
                     const Tolerances& tolerances) {
  const auto ids = family.local_pieces(x);
  std::vector<std::pair<PieceId, double>> values;
  values.reserve(ids.size());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& id : ids) {
    const double v = family.piece(id).value(x);
    values.emplace_back(id, v);
    best = std::min(best, v);
  }

  ActiveSet aset;
  aset.point = x;
  aset.value = best;
  aset.tolerance_used = (tol && *tol > 0.0) ? *tol : tolerances.active_width(best);
  for (auto& [id, v] : values) {
    // Inclusive: a piece sitting exactly on the tolerance boundary is active.
    if (v - best <= aset.tolerance_used) {
      aset.members.push_back(ActiveMember{id, v, gradient_at(family, id, x)});
    }
  }
  return aset;
}

double directional_derivative(const std::vector<Vector>& gradients, const Vector& v) {
  if (gradients.empty()) raise(ErrorCode::EmptyGradientList, "no gradients");
  if (!(v.norm() > 0.0)) raise(ErrorCode::ZeroDirection, "direction has zero length");
  double rate = std::numeric_limits<double>::infinity();
  for (const auto& g : gradients) rate = std::min(rate, g.dot(v));
  return rate;
}

double directional_derivative(const ActiveSet& aset, const Vector& v) {
  return directional_derivative(aset.gradients(), v);
}

}  // namespace mintype
