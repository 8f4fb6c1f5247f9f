#include "mintype/critical_finder.hpp"

#include "mintype/simplex.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace mintype {

namespace {

bool equal_quadratic_terms(const std::vector<ConvexQuadratic>& pieces) {
  const Matrix& a0 = pieces.front().A;
  const double scale = std::max(1.0, a0.cwiseAbs().maxCoeff());
  return std::all_of(pieces.begin(), pieces.end(), [&](const ConvexQuadratic& q) {
    return (q.A - a0).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  });
}

std::optional<SubsetStationaryPoint> finish(const std::vector<ConvexQuadratic>& pieces, Vector x,
                                            std::vector<double> lambda) {
  for (auto& l : lambda) l = std::max(0.0, l);
  const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  for (auto& l : lambda) l /= total;
  SubsetStationaryPoint out;
  out.value = pieces.front().value(x);
  out.location = std::move(x);
  out.lambda = std::move(lambda);
  return out;
}

// Equal A: the equal-value loci are hyperplanes and stationarity puts x in
// the affine hull of the piece minimizers, x = sum lambda_j m_j.
std::optional<SubsetStationaryPoint> solve_equal_quadratic(const std::vector<ConvexQuadratic>& pieces) {
  const auto k = static_cast<Eigen::Index>(pieces.size());
  const auto n = static_cast<Eigen::Index>(pieces.front().dim());
  Matrix minimizers(n, k);
  for (Eigen::Index j = 0; j < k; ++j) minimizers.col(j) = pieces[static_cast<std::size_t>(j)].minimizer();

  Matrix system(k, k);
  Vector rhs(k);
  const auto& first = pieces.front();
  for (Eigen::Index i = 1; i < k; ++i) {
    const auto& qi = pieces[static_cast<std::size_t>(i)];
    system.row(i - 1) = (qi.b - first.b).transpose() * minimizers;
    rhs[i - 1] = first.c - qi.c;
  }
  system.row(k - 1).setOnes();
  rhs[k - 1] = 1.0;

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(system);
  cod.setThreshold(1e-12);
  if (cod.rank() == k) {
    const Vector lambda = cod.solve(rhs);
    if (lambda.minCoeff() < -1e-12) return std::nullopt;
    const Vector x = minimizers * lambda;
    return finish(pieces, x, std::vector<double>(lambda.data(), lambda.data() + k));
  }

  // Rank deficient: look for any nonnegative solution, then require the
  // location to be independent of the remaining freedom in lambda.
  lp::LinearProgram prog(static_cast<int>(k) + 1);
  prog.set_free(static_cast<int>(k));
  Vector objective = Vector::Zero(k + 1);
  objective[k] = 1.0;
  prog.set_objective(objective);
  for (Eigen::Index i = 0; i < k; ++i) {
    Vector row(k + 1);
    row.head(k) = system.row(i).transpose();
    row[k] = 0.0;
    prog.add_constraint(row, lp::Relation::Equal, rhs[i]);
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector row = Vector::Zero(k + 1);
    row[j] = 1.0;
    row[k] = -1.0;
    prog.add_constraint(row, lp::Relation::GreaterEqual, 0.0);
  }
  const auto result = prog.maximize();
  if (result.status != lp::Status::Optimal) return std::nullopt;
  const Vector lambda = result.x.head(k);
  if ((system * lambda - rhs).norm() > 1e-9) return std::nullopt;

  Eigen::FullPivLU<Matrix> lu(system);
  lu.setThreshold(1e-12);
  const Matrix null_space = lu.kernel();
  if ((minimizers * null_space).cwiseAbs().maxCoeff() > 1e-9) {
    raise(ErrorCode::SingularSystem, "equal-value locus of the subset is not a single point");
  }
  return finish(pieces, minimizers * lambda, std::vector<double>(lambda.data(), lambda.data() + k));
}

// Dual of min_x max_i f_i(x): D(lambda) = min_x sum lambda_i f_i(x), concave
// on the simplex with gradient f_i(x(lambda)).
struct DualPoint {
  Vector x;
  Vector values;
  double dual = 0.0;
};

DualPoint evaluate_dual(const std::vector<ConvexQuadratic>& pieces, const Vector& lambda) {
  const auto n = pieces.front().dim();
  Matrix q = Matrix::Zero(n, n);
  Vector b = Vector::Zero(n);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    q += lambda[static_cast<Eigen::Index>(i)] * pieces[i].A;
    b += lambda[static_cast<Eigen::Index>(i)] * pieces[i].b;
  }
  DualPoint out;
  out.x = (2.0 * q).ldlt().solve(-b);
  out.values.resize(static_cast<Eigen::Index>(pieces.size()));
  for (std::size_t i = 0; i < pieces.size(); ++i) out.values[static_cast<Eigen::Index>(i)] = pieces[i].value(out.x);
  out.dual = lambda.dot(out.values);
  return out;
}

Vector project_to_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

// Newton on the full system: sum lambda_i grad f_i = 0, sum lambda = 1,
// f_i = f_0. Returns false if the Jacobian is singular or it fails to converge.
bool polish(const std::vector<ConvexQuadratic>& pieces, Vector& x, Vector& lambda) {
  const auto n = static_cast<Eigen::Index>(pieces.front().dim());
  const auto k = static_cast<Eigen::Index>(pieces.size());
  auto residual = [&](const Vector& px, const Vector& pl) {
    Vector r = Vector::Zero(n + k);
    for (Eigen::Index i = 0; i < k; ++i) r.head(n) += pl[i] * pieces[static_cast<std::size_t>(i)].gradient(px);
    r[n] = pl.sum() - 1.0;
    const double f0 = pieces.front().value(px);
    for (Eigen::Index i = 1; i < k; ++i) r[n + i] = pieces[static_cast<std::size_t>(i)].value(px) - f0;
    return r;
  };
  Vector r = residual(x, lambda);
  for (int iter = 0; iter < 30 && r.norm() > 1e-15; ++iter) {
    Matrix jac = Matrix::Zero(n + k, n + k);
    const Vector g0 = pieces.front().gradient(x);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& q = pieces[static_cast<std::size_t>(i)];
      const Vector gi = q.gradient(x);
      jac.topLeftCorner(n, n) += lambda[i] * q.hessian();
      jac.block(0, n + i, n, 1) = gi;
      if (i > 0) jac.block(n + i, 0, 1, n) = (gi - g0).transpose();
    }
    jac.block(n, n, 1, k).setOnes();
    Eigen::FullPivLU<Matrix> lu(jac);
    if (!lu.isInvertible()) return false;
    const Vector step = lu.solve(-r);
    const Vector nx = x + step.head(n);
    const Vector nl = lambda + step.tail(k);
    const Vector nr = residual(nx, nl);
    if (!(nr.norm() < r.norm())) break;
    x = nx;
    lambda = nl;
    r = nr;
  }
  return true;
}

std::optional<SubsetStationaryPoint> solve_general(const std::vector<ConvexQuadratic>& pieces, const Tolerances& tol) {
  const auto k = static_cast<Eigen::Index>(pieces.size());
  Vector lambda = Vector::Constant(k, 1.0 / static_cast<double>(k));
  DualPoint current = evaluate_dual(pieces, lambda);
  double step = 1.0 / std::max(1.0, current.values.cwiseAbs().maxCoeff());
  for (int iter = 0; iter < 200000; ++iter) {
    const double gap = current.values.maxCoeff() - current.dual;
    if (gap <= 1e-15 * std::max(1.0, std::abs(current.dual))) break;
    bool moved = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      const Vector trial = project_to_simplex(lambda + step * current.values);
      const Vector delta = trial - lambda;
      if (delta.norm() <= 1e-17) break;
      DualPoint next = evaluate_dual(pieces, trial);
      if (next.dual >= current.dual + current.values.dot(delta) - delta.squaredNorm() / (2.0 * step)) {
        lambda = trial;
        current = std::move(next);
        step *= 1.5;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }

  const double top = current.values.maxCoeff();
  if (top - current.values.minCoeff() > 10.0 * tol.active_width(top)) return std::nullopt;
  Vector x = current.x;
  Vector polished_lambda = lambda;
  if (polish(pieces, x, polished_lambda) && polished_lambda.minCoeff() >= -1e-9) {
    return finish(pieces, x, std::vector<double>(polished_lambda.data(), polished_lambda.data() + k));
  }
  return finish(pieces, current.x, std::vector<double>(lambda.data(), lambda.data() + k));
}

template <typename Visit>
void for_each_subset(std::size_t count, std::size_t size, Visit&& visit) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  if (size == 0 || size > count) return;
  while (true) {
    visit(idx);
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == count - size + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<SubsetStationaryPoint> solve_subset_stationary(const std::vector<ConvexQuadratic>& pieces,
                                                             const Tolerances& tol) {
  if (pieces.empty()) raise(ErrorCode::InvalidArgument, "empty subset");
  if (pieces.size() == 1) return finish(pieces, pieces.front().minimizer(), {1.0});
  if (equal_quadratic_terms(pieces)) return solve_equal_quadratic(pieces);
  return solve_general(pieces, tol);
}

std::vector<Vector> candidate_points_for_subset(const Family& family, const std::vector<PieceId>& subset,
                                                const Box& region, const Tolerances& tol, SubsetMatch match) {
  if (subset.empty()) raise(ErrorCode::InvalidArgument, "empty subset");
  if (subset.size() > static_cast<std::size_t>(family.dim()) + 1) {
    raise(ErrorCode::SubsetTooLarge, std::to_string(subset.size()) + " pieces exceed n+1 = " +
                                         std::to_string(family.dim() + 1));
  }
  std::vector<ConvexQuadratic> pieces;
  pieces.reserve(subset.size());
  for (const auto& id : subset) pieces.push_back(family.piece(id));

  const auto solution = solve_subset_stationary(pieces, tol);
  if (!solution || !region.contains(solution->location, 1e-9)) return {};

  const auto active = active_set(family, solution->location, std::nullopt, tol);
  const bool all_in = std::all_of(subset.begin(), subset.end(), [&](const PieceId& id) { return active.contains(id); });
  if (!all_in) return {};
  if (match == SubsetMatch::Exact && active.size() != subset.size()) return {};
  return {solution->location};
}

std::vector<CriticalPoint> find_all_critical(const Family& family, const Box& input_region, const Tolerances& tol) {
  const Box region = family.is_periodic() ? Box::unit_cell(family.dim()) : input_region;
  region.check();
  if (region.dim() != family.dim()) raise(ErrorCode::DimensionMismatch, "region dimension does not match family");

  const auto pieces = family.pieces_near(region);
  std::vector<Vector> piece_sites;
  if (family.is_periodic()) {
    for (const auto& id : pieces) piece_sites.push_back(*family.piece(id).center);
  }
  const double reach = 2.0 * family.activity_radius();

  std::vector<CriticalPoint> found;
  auto consider = [&](const Vector& x) {
    const Vector location = family.wrap(x);
    for (const auto& cp : found) {
      if (family.distance(cp.location, location) < tol.dedup) return;
    }
    auto cls = classify_point(family, location, std::nullopt, tol);
    if (!cls.is_critical()) return;
    CriticalPoint cp;
    cp.location = location;
    cp.value = evaluate_min(family, location);
    cp.index = cls.index;
    cp.certificate = std::move(cls.lambda);
    cp.active = std::move(cls.active);
    found.push_back(std::move(cp));
  };

  const std::size_t max_size = std::min(pieces.size(), static_cast<std::size_t>(family.dim()) + 1);
  for (std::size_t size = 1; size <= max_size; ++size) {
    for_each_subset(pieces.size(), size, [&](const std::vector<std::size_t>& idx) {
      if (!piece_sites.empty()) {
        // Pieces active at a common point have sites within twice the activity radius.
        for (std::size_t a = 0; a < idx.size(); ++a) {
          for (std::size_t b = a + 1; b < idx.size(); ++b) {
            if ((piece_sites[idx[a]] - piece_sites[idx[b]]).norm() > reach) return;
          }
        }
      }
      std::vector<PieceId> subset;
      subset.reserve(idx.size());
      for (auto i : idx) subset.push_back(pieces[i]);
      for (const auto& x : candidate_points_for_subset(family, subset, region, tol, SubsetMatch::Contained)) {
        consider(x);
      }
    });
  }

  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.index != b.index) return a.index < b.index;
    return std::lexicographical_compare(a.location.data(), a.location.data() + a.location.size(), b.location.data(),
                                        b.location.data() + b.location.size());
  });
  return found;
}

}  // namespace mintype
