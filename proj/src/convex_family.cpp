#include "mintype/convex_family.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace mintype {

ConvexQuadratic::ConvexQuadratic(Matrix a, Vector lin, double offset)
    : A(std::move(a)), b(std::move(lin)), c(offset) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    raise(ErrorCode::DimensionMismatch, "quadratic coefficient is " + std::to_string(A.rows()) + "x" +
                                            std::to_string(A.cols()) + " but linear term has " +
                                            std::to_string(b.size()) + " entries");
  }
}

ConvexQuadratic ConvexQuadratic::squared_distance(const Vector& site, double weight) {
  const auto n = site.size();
  ConvexQuadratic q(weight * Matrix::Identity(n, n), -2.0 * weight * site, weight * site.squaredNorm());
  q.center = site;
  q.weight = weight;
  return q;
}

double ConvexQuadratic::value(const Vector& x) const {
  if (center) return weight * (x - *center).squaredNorm();
  return x.dot(A * x) + b.dot(x) + c;
}

Vector ConvexQuadratic::gradient(const Vector& x) const {
  if (center) return 2.0 * weight * (x - *center);
  return 2.0 * (A * x) + b;
}

Vector ConvexQuadratic::minimizer() const {
  if (center) return *center;
  return (2.0 * A).ldlt().solve(-b);
}

ConvexQuadratic ConvexQuadratic::scaled(double factor) const {
  if (center) return squared_distance(*center, weight * factor);
  ConvexQuadratic q(factor * A, factor * b, factor * c);
  q.weight = weight * factor;
  return q;
}

ConvexQuadratic ConvexQuadratic::translated(const Vector& shift) const {
  if (center) return squared_distance(*center + shift, weight);
  // f(x - m) = x'Ax + (b - 2Am)'x + m'Am - b'm + c
  ConvexQuadratic q(A, b - 2.0 * (A * shift), shift.dot(A * shift) - b.dot(shift) + c);
  q.weight = weight;
  return q;
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Quadratic: return "quadratic";
    case FamilyKind::PointSites: return "point_sites";
    case FamilyKind::Periodic: return "periodic";
  }
  return "unknown";
}

std::string format_piece(const PieceId& id) {
  std::ostringstream out;
  out << id.base;
  if (!id.shift.empty()) {
    out << '[';
    for (std::size_t i = 0; i < id.shift.size(); ++i) out << (i ? "," : "") << id.shift[i];
    out << ']';
  }
  return out.str();
}

double ScalingVector::at(std::size_t index) const {
  auto it = entries.find(index);
  return it == entries.end() ? 1.0 : it->second;
}

bool ScalingVector::is_identity() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second == 1.0; });
}

double ScalingVector::max_deviation() const {
  double dev = 0.0;
  for (const auto& [index, value] : entries) dev = std::max(dev, std::abs(value - 1.0));
  return dev;
}

namespace {

int infer_dim(const std::vector<Vector>& points) {
  if (points.empty()) raise(ErrorCode::EmptyFamily, "cannot infer dimension of an empty family");
  return static_cast<int>(points.front().size());
}

void check_dims(int dim, const std::vector<Vector>& points, const char* what) {
  if (dim < 1) raise(ErrorCode::DimensionMismatch, "dimension must be at least 1");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) {
      raise(ErrorCode::DimensionMismatch, std::string(what) + " " + std::to_string(i) + " has " +
                                              std::to_string(points[i].size()) + " coordinates, expected " +
                                              std::to_string(dim));
    }
  }
}

}  // namespace

Family Family::quadratic(std::vector<ConvexQuadratic> pieces) {
  if (pieces.empty()) raise(ErrorCode::EmptyFamily, "cannot infer dimension of an empty family");
  const int dim = pieces.front().dim();
  return quadratic(dim, std::move(pieces));
}

Family Family::quadratic(int dim, std::vector<ConvexQuadratic> pieces) {
  if (dim < 1) raise(ErrorCode::DimensionMismatch, "dimension must be at least 1");
  Family f(FamilyKind::Quadratic, dim);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].dim() != dim || pieces[i].A.rows() != dim || pieces[i].A.cols() != dim) {
      raise(ErrorCode::DimensionMismatch, "piece " + std::to_string(i) + " does not have dimension " +
                                              std::to_string(dim));
    }
  }
  f.weights_.assign(pieces.size(), 1.0);
  f.pieces_ = std::move(pieces);
  return f;
}

Family Family::point_sites(std::vector<Vector> sites) {
  const int dim = infer_dim(sites);
  return point_sites(dim, std::move(sites));
}

Family Family::point_sites(int dim, std::vector<Vector> sites) {
  check_dims(dim, sites, "site");
  Family f(FamilyKind::PointSites, dim);
  for (const auto& s : sites) f.pieces_.push_back(ConvexQuadratic::squared_distance(s));
  f.weights_.assign(sites.size(), 1.0);
  f.sites_ = std::move(sites);
  return f;
}

Family Family::periodic(std::vector<Vector> base_sites) {
  const int dim = infer_dim(base_sites);
  return periodic(dim, std::move(base_sites));
}

Family Family::periodic(int dim, std::vector<Vector> base_sites) {
  Family f = point_sites(dim, std::move(base_sites));
  f.kind_ = FamilyKind::Periodic;
  return f;
}

Family Family::with_weights(std::vector<double> weights) const {
  assert(weights.size() == pieces_.size());
  Family f = *this;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    f.pieces_[i] = pieces_[i].scaled(weights[i] / weights_[i]);
    if (!sites_.empty()) f.pieces_[i] = ConvexQuadratic::squared_distance(sites_[i], weights[i]);
  }
  f.weights_ = std::move(weights);
  return f;
}

bool Family::has_piece(const PieceId& id) const {
  if (id.base >= pieces_.size()) return false;
  return is_periodic() ? id.shift.size() == static_cast<std::size_t>(dim_) : id.shift.empty();
}

ConvexQuadratic Family::piece(const PieceId& id) const {
  if (!has_piece(id)) raise(ErrorCode::UnknownPieceIndex, "no piece " + format_piece(id));
  if (!is_periodic()) return pieces_[id.base];
  Vector shift(dim_);
  for (int i = 0; i < dim_; ++i) shift[i] = id.shift[static_cast<std::size_t>(i)];
  return pieces_[id.base].translated(shift);
}

double Family::locality_radius() const {
  if (!is_periodic() || weights_.empty()) return std::numeric_limits<double>::infinity();
  const auto [lo, hi] = std::minmax_element(weights_.begin(), weights_.end());
  return std::sqrt(static_cast<double>(dim_)) * std::max(2.0, std::sqrt(*hi / *lo));
}

double Family::activity_radius() const {
  if (!is_periodic() || weights_.empty()) return std::numeric_limits<double>::infinity();
  // Some translate lies within sqrt(n)/2 of every point, so the minimum never
  // exceeds w_max n / 4; a translate at distance d contributes at least w_min d^2.
  const auto [lo, hi] = std::minmax_element(weights_.begin(), weights_.end());
  return 0.5 * std::sqrt(static_cast<double>(dim_)) * std::sqrt(*hi / *lo) * (1.0 + 1e-9) + 1e-12;
}

namespace {

// Calls visit(shift) for every integer vector with lo[i] <= shift[i] <= hi[i].
template <typename Visit>
void for_each_lattice_point(const std::vector<int>& lo, const std::vector<int>& hi, Visit&& visit) {
  std::vector<int> m = lo;
  const std::size_t n = lo.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (lo[i] > hi[i]) return;
  }
  while (true) {
    visit(m);
    std::size_t axis = 0;
    while (axis < n) {
      if (++m[axis] <= hi[axis]) break;
      m[axis] = lo[axis];
      ++axis;
    }
    if (axis == n) return;
  }
}

}  // namespace

std::vector<PieceId> Family::translates_within(const Vector& x, double radius) const {
  std::vector<PieceId> out;
  const auto n = static_cast<std::size_t>(dim_);
  std::vector<int> lo(n), hi(n);
  for (std::size_t s = 0; s < sites_.size(); ++s) {
    const Vector delta = x - sites_[s];
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = static_cast<int>(std::floor(delta[static_cast<Eigen::Index>(i)] - radius));
      hi[i] = static_cast<int>(std::ceil(delta[static_cast<Eigen::Index>(i)] + radius));
    }
    for_each_lattice_point(lo, hi, [&](const std::vector<int>& m) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = delta[static_cast<Eigen::Index>(i)] - m[i];
        d2 += d * d;
      }
      if (d2 <= radius * radius) out.push_back(PieceId{s, m});
    });
  }
  return out;
}

std::vector<PieceId> Family::local_pieces(const Vector& x) const {
  if (x.size() != dim_) {
    raise(ErrorCode::DimensionMismatch, "point has " + std::to_string(x.size()) + " coordinates, family has " +
                                            std::to_string(dim_));
  }
  if (is_periodic()) return translates_within(x, locality_radius());
  std::vector<PieceId> out;
  out.reserve(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) out.push_back(PieceId{i, {}});
  return out;
}

std::vector<PieceId> Family::pieces_near(const Box& box) const {
  if (!is_periodic()) return local_pieces(box.lo);
  const double r = activity_radius();
  const auto n = static_cast<std::size_t>(dim_);
  std::vector<PieceId> out;
  std::vector<int> lo(n), hi(n);
  for (std::size_t s = 0; s < sites_.size(); ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      lo[i] = static_cast<int>(std::floor(box.lo[k] - r - sites_[s][k]));
      hi[i] = static_cast<int>(std::ceil(box.hi[k] + r - sites_[s][k]));
    }
    for_each_lattice_point(lo, hi, [&](const std::vector<int>& m) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double p = sites_[s][k] + m[i];
        const double gap = std::max({box.lo[k] - p, 0.0, p - box.hi[k]});
        d2 += gap * gap;
      }
      if (d2 <= r * r) out.push_back(PieceId{s, m});
    });
  }
  return out;
}

Vector Family::wrap(const Vector& x) const {
  if (!is_periodic()) return x;
  Vector y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y[i] -= std::floor(y[i]);
    if (y[i] >= 1.0 - 1e-12) y[i] = 0.0;
  }
  return y;
}

double Family::distance(const Vector& x, const Vector& y) const {
  Vector d = x - y;
  if (is_periodic()) {
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] -= std::round(d[i]);
  }
  return d.norm();
}

namespace {

std::vector<Vector> locality_probes(int dim) {
  std::vector<Vector> probes;
  const int per_axis = dim <= 3 ? 4 : 2;
  std::vector<int> lo(static_cast<std::size_t>(dim), 0), hi(static_cast<std::size_t>(dim), per_axis - 1);
  for_each_lattice_point(lo, hi, [&](const std::vector<int>& m) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = (m[static_cast<std::size_t>(i)] + 0.5) / per_axis;
    probes.push_back(std::move(x));
  });
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(-0.5, 1.5);
  for (int k = 0; k < 32; ++k) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = unit(rng);
    probes.push_back(std::move(x));
  }
  return probes;
}

}  // namespace

ValidationReport validate_family(const Family& family) {
  ValidationReport report;
  auto fail = [&](ErrorCode code, std::string detail) {
    if (!report.failure) {
      report.failure = code;
      report.detail = std::move(detail);
    }
  };

  if (family.base_count() == 0) {
    fail(ErrorCode::EmptyFamily, "family has no pieces");
    return report;
  }

  for (std::size_t i = 0; i < family.base_count(); ++i) {
    const Matrix& A = family.base_pieces()[i].A;
    PieceReport piece;
    piece.index = i;
    piece.asymmetry = (A - A.transpose()).cwiseAbs().maxCoeff();
    piece.symmetric = piece.asymmetry <= kSymmetryTolerance;
    if (A.allFinite() && family.base_pieces()[i].b.allFinite() && std::isfinite(family.base_pieces()[i].c)) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
      piece.min_eigenvalue = eig.eigenvalues().minCoeff();
      piece.max_eigenvalue = eig.eigenvalues().maxCoeff();
      piece.positive_definite =
          piece.max_eigenvalue > 0.0 && piece.min_eigenvalue > kEigenRatioThreshold * piece.max_eigenvalue;
    }
    if (!piece.symmetric) {
      fail(ErrorCode::NonConvexPiece, "piece " + std::to_string(i) + " is not symmetric (asymmetry " +
                                          std::to_string(piece.asymmetry) + ")");
    } else if (!piece.positive_definite) {
      std::ostringstream msg;
      msg << "piece " << i << " is not strictly convex (eigenvalues in [" << piece.min_eigenvalue << ", "
          << piece.max_eigenvalue << "])";
      fail(ErrorCode::NonConvexPiece, msg.str());
    }
    report.pieces.push_back(piece);
  }

  const auto& sites = family.sites();
  if (family.is_periodic()) {
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if ((sites[i].array() < 0.0).any() || (sites[i].array() >= 1.0).any()) {
        fail(ErrorCode::InvalidArgument, "base site " + std::to_string(i) + " " + format_vector(sites[i]) +
                                             " lies outside [0,1)^n");
      }
    }
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      if (family.distance(sites[i], sites[j]) <= kSiteSeparation) {
        fail(ErrorCode::DuplicateSite, "sites " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }

  // Locality: the finite local set must reproduce the minimum found over a
  // strictly larger neighbourhood.
  report.locality_ok = true;
  if (family.is_periodic() && report.usable()) {
    for (const Vector& x : locality_probes(family.dim())) {
      ++report.locality_probes;
      const auto local = family.local_pieces(x);
      if (local.empty()) {
        report.locality_ok = false;
        break;
      }
      double local_min = std::numeric_limits<double>::infinity();
      for (const auto& id : local) local_min = std::min(local_min, family.piece(id).value(x));
      double wide_min = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < sites.size(); ++s) {
        // Any translate beyond 3x the radius is farther still; scan a ring of cells.
        const double r = 3.0 * family.locality_radius();
        const auto n = static_cast<std::size_t>(family.dim());
        std::vector<int> lo(n), hi(n);
        for (std::size_t i = 0; i < n; ++i) {
          const auto k = static_cast<Eigen::Index>(i);
          lo[i] = static_cast<int>(std::floor(x[k] - sites[s][k] - r));
          hi[i] = static_cast<int>(std::ceil(x[k] - sites[s][k] + r));
        }
        for_each_lattice_point(lo, hi, [&](const std::vector<int>& m) {
          wide_min = std::min(wide_min, family.piece(PieceId{s, m}).value(x));
        });
      }
      if (wide_min < local_min) {
        report.locality_ok = false;
        break;
      }
    }
    if (!report.locality_ok) fail(ErrorCode::NotLocallyFinite, "locality query misses the minimizing piece");
  } else {
    report.locality_probes = 1;
  }
  return report;
}

void require_usable(const ValidationReport& report) {
  if (report.failure) raise(*report.failure, report.detail);
}

Vector gradient_at(const Family& family, const PieceId& id, const Vector& x) {
  if (x.size() != family.dim()) raise(ErrorCode::DimensionMismatch, "point dimension does not match family");
  return family.piece(id).gradient(x);
}

Vector gradient_at(const Family& family, std::size_t index, const Vector& x) {
  PieceId id{index, {}};
  if (family.is_periodic()) id.shift.assign(static_cast<std::size_t>(family.dim()), 0);
  return gradient_at(family, id, x);
}

Family apply_scaling(const Family& family, const ScalingVector& scale) {
  std::vector<double> weights = family.weights();
  for (const auto& [index, factor] : scale.entries) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
      raise(ErrorCode::NonPositiveScale, "scale for piece " + std::to_string(index) + " is " + std::to_string(factor));
    }
    if (index >= weights.size()) {
      raise(ErrorCode::UnknownPieceIndex, "scale refers to piece " + std::to_string(index) + " but family has " +
                                              std::to_string(weights.size()));
    }
    weights[index] *= factor;
  }
  Family scaled = family.with_weights(std::move(weights));
  for ([[maybe_unused]] const auto& piece : scaled.base_pieces()) {
    assert(piece.weight > 0.0);
  }
  return scaled;
}

Box default_region(const Family& family, double padding) {
  const int n = family.dim();
  if (family.is_periodic()) return Box::unit_cell(n);
  Vector lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Vector hi = -lo;
  for (const auto& piece : family.base_pieces()) {
    const Vector m = piece.minimizer();
    lo = lo.cwiseMin(m);
    hi = hi.cwiseMax(m);
  }
  return Box{lo.array() - padding, hi.array() + padding};
}

}  // namespace mintype
