#pragma once

#include "mintype/box.hpp"
#include "mintype/error.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mintype {

// One smooth strictly convex piece, x'Ax + b'x + c.
//
// Pieces built with squared_distance() also keep their center and weight and
// are evaluated as weight * |x - center|^2, which is the same function with
// better cancellation behaviour near the site.
struct ConvexQuadratic {
  Matrix A;
  Vector b;
  double c = 0.0;
  std::optional<Vector> center;
  double weight = 1.0;

  ConvexQuadratic() = default;
  ConvexQuadratic(Matrix a, Vector lin, double offset);

  static ConvexQuadratic squared_distance(const Vector& site, double weight = 1.0);

  int dim() const { return static_cast<int>(b.size()); }
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian() const { return 2.0 * A; }
  // Unique minimizer -A^{-1} b / 2.
  Vector minimizer() const;

  ConvexQuadratic scaled(double factor) const;
  // The piece x -> f(x - shift).
  ConvexQuadratic translated(const Vector& shift) const;
};

enum class FamilyKind { Quadratic, PointSites, Periodic };

std::string_view to_string(FamilyKind kind);

// Identifies a piece: a base index plus, for periodic families, the integer
// lattice translate of that base piece.
struct PieceId {
  std::size_t base = 0;
  std::vector<int> shift;

  auto operator<=>(const PieceId&) const = default;
  bool operator==(const PieceId&) const = default;
};

std::string format_piece(const PieceId& id);

// Positive per-piece multipliers; unlisted indices are 1.
struct ScalingVector {
  std::map<std::size_t, double> entries;

  double at(std::size_t index) const;
  bool is_identity() const;
  // Deviation from 1 in the sup norm.
  double max_deviation() const;
};

// Locally finite family of convex pieces. Immutable once built.
//
// Quadratic and PointSites families are finite and the locality set is every
// piece. Periodic families hold squared distances to all Z^n translates of
// their base sites; the locality set at x is the finite set of translates
// within locality_radius() of x.
class Family {
 public:
  static Family quadratic(std::vector<ConvexQuadratic> pieces);
  static Family quadratic(int dim, std::vector<ConvexQuadratic> pieces);
  static Family point_sites(std::vector<Vector> sites);
  static Family point_sites(int dim, std::vector<Vector> sites);
  static Family periodic(std::vector<Vector> base_sites);
  static Family periodic(int dim, std::vector<Vector> base_sites);

  FamilyKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_periodic() const { return kind_ == FamilyKind::Periodic; }
  std::size_t base_count() const { return pieces_.size(); }

  const std::vector<ConvexQuadratic>& base_pieces() const { return pieces_; }
  // Site coordinates (PointSites and Periodic only).
  const std::vector<Vector>& sites() const { return sites_; }
  // Accumulated scaling applied to each base piece.
  const std::vector<double>& weights() const { return weights_; }

  ConvexQuadratic piece(const PieceId& id) const;
  bool has_piece(const PieceId& id) const;

  // Finite candidate set containing every piece that can realize the
  // minimum at x.
  std::vector<PieceId> local_pieces(const Vector& x) const;
  // Every piece that can realize the minimum somewhere in the box.
  std::vector<PieceId> pieces_near(const Box& box) const;

  // Periodic families: translates farther than this from x never realize the minimum.
  double locality_radius() const;
  // Periodic families: a piece active anywhere is within this distance of its site.
  double activity_radius() const;

  // Reduces a point into the fundamental domain [0,1)^n (periodic only; identity otherwise).
  Vector wrap(const Vector& x) const;
  // Euclidean distance, measured on the torus for periodic families.
  double distance(const Vector& x, const Vector& y) const;

  Family with_weights(std::vector<double> weights) const;

 private:
  Family(FamilyKind kind, int dim) : kind_(kind), dim_(dim) {}
  std::vector<PieceId> translates_within(const Vector& x, double radius) const;

  FamilyKind kind_;
  int dim_;
  std::vector<ConvexQuadratic> pieces_;
  std::vector<Vector> sites_;
  std::vector<double> weights_;
};

struct PieceReport {
  std::size_t index = 0;
  double asymmetry = 0.0;
  bool symmetric = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool positive_definite = false;
};

struct ValidationReport {
  std::vector<PieceReport> pieces;
  bool locality_ok = false;
  std::size_t locality_probes = 0;
  std::optional<ErrorCode> failure;
  std::string detail;

  bool usable() const { return !failure.has_value(); }
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kEigenRatioThreshold = 1e-10;
inline constexpr double kSiteSeparation = 1e-9;

// Checks symmetry and positive definiteness of every piece, site
// separation, and the locality query on a set of probe points.
ValidationReport validate_family(const Family& family);

// Throws the report's failure, if any.
void require_usable(const ValidationReport& report);

Vector gradient_at(const Family& family, const PieceId& id, const Vector& x);
Vector gradient_at(const Family& family, std::size_t index, const Vector& x);

Family apply_scaling(const Family& family, const ScalingVector& scale);

// Unit cell for periodic families, otherwise the bounding box of the piece
// minimizers grown by `padding` on every side.
Box default_region(const Family& family, double padding = 1.0);

}  // namespace mintype
