#include "mintype/classifier.hpp"

#include "mintype/simplex.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mintype {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Regular: return "Regular";
    case Verdict::Critical: return "Critical";
    case Verdict::DegenerateRegular: return "DegenerateRegular";
  }
  return "Unknown";
}

namespace {

int common_dim(const std::vector<Vector>& gradients) {
  if (gradients.empty()) raise(ErrorCode::EmptyGradientList, "no gradients");
  const auto n = gradients.front().size();
  for (const auto& g : gradients) {
    if (g.size() != n) raise(ErrorCode::DimensionMismatch, "gradients have inconsistent dimensions");
  }
  return static_cast<int>(n);
}

Vector combine(const std::vector<Vector>& gradients, const std::vector<double>& lambda) {
  Vector sum = Vector::Zero(gradients.front().size());
  for (std::size_t i = 0; i < gradients.size(); ++i) sum += lambda[i] * gradients[i];
  return sum;
}

}  // namespace

IncreaseTest has_increase_direction(const std::vector<Vector>& gradients, const Tolerances& tol) {
  const int n = common_dim(gradients);
  // Variables: v (n, free), t (free). maximize t s.t. <g_i, v> - t >= 0, |v_j| <= 1.
  lp::LinearProgram prog(n + 1);
  for (int j = 0; j <= n; ++j) prog.set_free(j);
  Vector c = Vector::Zero(n + 1);
  c[n] = 1.0;
  prog.set_objective(c);
  for (const auto& g : gradients) {
    Vector row(n + 1);
    row.head(n) = g;
    row[n] = -1.0;
    prog.add_constraint(row, lp::Relation::GreaterEqual, 0.0);
  }
  for (int j = 0; j < n; ++j) {
    Vector row = Vector::Zero(n + 1);
    row[j] = 1.0;
    prog.add_constraint(row, lp::Relation::LessEqual, 1.0);
    prog.add_constraint(row, lp::Relation::GreaterEqual, -1.0);
  }
  const auto result = prog.maximize();
  IncreaseTest out;
  if (result.status != lp::Status::Optimal) return out;
  Vector v = result.x.head(n);
  v = v.cwiseMax(-1.0).cwiseMin(1.0);
  // Recompute the margin from the direction itself rather than trusting t.
  out.margin = directional_derivative(gradients, v.norm() > 0.0 ? v : Vector::Ones(n));
  if (v.norm() == 0.0) out.margin = 0.0;
  out.exists = out.margin > tol.feasibility;
  if (out.exists) out.direction = v;
  return out;
}

CombinationTest positive_combination(const std::vector<Vector>& gradients, const Tolerances& tol) {
  const int n = common_dim(gradients);
  const int k = static_cast<int>(gradients.size());
  // Variables: lambda (k, >= 0), s (free). maximize s s.t.
  //   sum lambda_i g_i = 0, sum lambda_i = 1, lambda_i - s >= 0.
  lp::LinearProgram prog(k + 1);
  prog.set_free(k);
  Vector c = Vector::Zero(k + 1);
  c[k] = 1.0;
  prog.set_objective(c);
  for (int d = 0; d < n; ++d) {
    Vector row = Vector::Zero(k + 1);
    for (int i = 0; i < k; ++i) row[i] = gradients[static_cast<std::size_t>(i)][d];
    prog.add_constraint(row, lp::Relation::Equal, 0.0);
  }
  Vector sum_row = Vector::Zero(k + 1);
  sum_row.head(k).setOnes();
  prog.add_constraint(sum_row, lp::Relation::Equal, 1.0);
  for (int i = 0; i < k; ++i) {
    Vector row = Vector::Zero(k + 1);
    row[i] = 1.0;
    row[k] = -1.0;
    prog.add_constraint(row, lp::Relation::GreaterEqual, 0.0);
  }

  CombinationTest out;
  const auto result = prog.maximize();
  if (result.status != lp::Status::Optimal) return out;
  out.lambda.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.lambda[static_cast<std::size_t>(i)] = std::max(0.0, result.x[i]);
  const double total = std::accumulate(out.lambda.begin(), out.lambda.end(), 0.0);
  if (total <= 0.0) return CombinationTest{};
  for (auto& l : out.lambda) l /= total;
  out.min_weight = *std::min_element(out.lambda.begin(), out.lambda.end());
  out.residual = combine(gradients, out.lambda).norm();
  out.in_hull = out.residual < tol.feasibility;
  out.exists = out.in_hull && out.min_weight > tol.feasibility;
  return out;
}

int span_rank(const std::vector<Vector>& gradients, const Tolerances& tol) {
  const int n = common_dim(gradients);
  Matrix m(n, static_cast<Eigen::Index>(gradients.size()));
  double largest_norm = 0.0;
  for (std::size_t i = 0; i < gradients.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = gradients[i];
    largest_norm = std::max(largest_norm, gradients[i].norm());
  }
  if (largest_norm < 1e-12) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = tol.rank * sv[0];
  return static_cast<int>((sv.array() > cutoff).count());
}

namespace {

Classification decide(const ActiveSet& active, const Tolerances& tol) {
  Classification out;
  out.active = active;
  const auto gradients = active.gradients();
  if (gradients.empty()) raise(ErrorCode::EmptyGradientList, "active set is empty");
  if (gradients.size() == 1) {
    const Vector& g = gradients.front();
    if (g.norm() < tol.zero_gradient) {
      out.verdict = Verdict::Critical;
      out.index = 0;
      out.span_rank = 0;
      out.lambda = {1.0};
      out.margin = 1.0;
      out.residual = g.norm();
    } else {
      out.verdict = Verdict::Regular;
      out.direction = g / g.cwiseAbs().maxCoeff();
      out.margin = g.dot(*out.direction);
      out.span_rank = 1;
    }
    return out;
  }

  out.span_rank = span_rank(gradients, tol);
  const auto increase = has_increase_direction(gradients, tol);
  if (increase.exists) {
    out.verdict = Verdict::Regular;
    out.direction = increase.direction;
    out.margin = increase.margin;
    return out;
  }

  // All gradients lie in their span V, so a vanishing strictly positive
  // combination in R^n is the same as one in V.
  const auto combo = positive_combination(gradients, tol);
  if (combo.in_hull) out.lambda = combo.lambda;
  out.residual = combo.residual;
  out.margin = combo.min_weight;
  if (combo.exists) {
    out.verdict = Verdict::Critical;
    out.index = out.span_rank;
  } else {
    out.verdict = Verdict::DegenerateRegular;
  }
  return out;
}

}  // namespace

Classification classify_active_set(const ActiveSet& active, const Tolerances& tol) {
  auto result = decide(active, tol);
#ifdef MINTYPE_CHECK_CERTIFICATES
  check_certificate(result, tol);
#endif
  return result;
}

Classification classify_point(const Family& family, const Vector& x, std::optional<double> active_tol,
                              const Tolerances& tol) {
  return classify_active_set(active_set(family, x, active_tol, tol), tol);
}

void check_certificate(const Classification& c, const Tolerances& tol) {
  const auto gradients = c.active.gradients();
  switch (c.verdict) {
    case Verdict::Critical: {
      if (c.lambda.size() != gradients.size()) raise(ErrorCode::SingularSystem, "certificate length mismatch");
      const double sum = std::accumulate(c.lambda.begin(), c.lambda.end(), 0.0);
      const double min_l = *std::min_element(c.lambda.begin(), c.lambda.end());
      const double residual = combine(gradients, c.lambda).norm();
      const bool lone_minimizer = gradients.size() == 1 && residual < tol.zero_gradient;
      if (!lone_minimizer && (residual >= tol.feasibility || min_l <= tol.feasibility)) {
        raise(ErrorCode::SingularSystem, "critical certificate fails: residual " + std::to_string(residual) +
                                             ", min weight " + std::to_string(min_l));
      }
      if (std::abs(sum - 1.0) > 1e-9) raise(ErrorCode::SingularSystem, "critical certificate weights do not sum to 1");
      if (c.index != c.span_rank) raise(ErrorCode::SingularSystem, "index differs from span rank");
      break;
    }
    case Verdict::Regular: {
      if (!c.direction) raise(ErrorCode::SingularSystem, "regular verdict without a witness direction");
      const double rate = directional_derivative(gradients, *c.direction);
      if (!(rate > tol.feasibility)) {
        raise(ErrorCode::SingularSystem, "witness direction rate " + std::to_string(rate) + " is not positive");
      }
      break;
    }
    case Verdict::DegenerateRegular: {
      if (!c.lambda.empty()) {
        const double residual = combine(gradients, c.lambda).norm();
        const double min_l = *std::min_element(c.lambda.begin(), c.lambda.end());
        if (residual >= tol.feasibility || min_l > tol.feasibility) {
          raise(ErrorCode::SingularSystem, "degenerate certificate is not a boundary combination");
        }
      }
      break;
    }
  }
}

}  // namespace mintype
