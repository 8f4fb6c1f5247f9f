#pragma once

#include "mintype/critical_finder.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mintype {

struct GridSpec {
  Box region;
  int resolution = 256;  // cells per axis
  bool periodic = false;

  // Default sweep grid for a family: the unit cell for periodic families,
  // otherwise the given region; 256 cells per axis in 2-D, 64 in 3-D.
  static GridSpec for_family(const Family& family, const Box& region);
};

// Values of the Min-type function on the vertices of a regular grid.
// Periodic grids have `resolution` vertices per axis and wrap around;
// others have `resolution + 1`.
class GridSample {
 public:
  static GridSample sample(const Family& family, const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int vertices_per_axis() const { return per_axis_; }
  const std::vector<double>& values() const { return values_; }
  Vector vertex(std::size_t linear) const;
  // Largest value difference between grid neighbours.
  double max_step() const;

 private:
  GridSpec spec_;
  int dim_ = 0;
  int per_axis_ = 0;
  std::vector<double> values_;
  std::vector<std::uint32_t> owner_;  // minimizing piece per vertex, as an index into owner_ids_
  std::vector<PieceId> owner_ids_;

  friend class CubicalFiltration;
};

// Cells of the cubical complex on a grid. A cell lies in the sublevel set at
// t iff its tag is <= t.
//
// With only the grid, the tag is the largest vertex value. Given the family
// as well, the tag is the supremum of f over the closed cell, so a cell is
// included only when it lies entirely inside the true sublevel set. This
// stops sublevel sets from leaking across the ridges where two pieces meet.
// The supremum is exact when the pieces meeting in a cell share a Hessian,
// and estimated on a sub-lattice otherwise.
class CubicalFiltration {
 public:
  explicit CubicalFiltration(const GridSample& grid);
  CubicalFiltration(const Family& family, const GridSample& grid);

  long euler(double t) const;

 private:
  std::vector<double> even_;  // cells of even dimension, sorted
  std::vector<double> odd_;
};

struct SweepPoint {
  double t = 0.0;
  long chi = 0;
};

// Euler characteristic of the sampled sublevel set at each threshold.
std::vector<SweepPoint> euler_sweep(const Family& family, const GridSpec& grid, const std::vector<double>& thresholds);
std::vector<SweepPoint> euler_sweep(const CubicalFiltration& filtration, const std::vector<double>& thresholds);

struct SweepJump {
  double value = 0.0;
  long expected = 0;  // sum of (-1)^index over critical points at this value
  long observed = 0;  // chi(value + delta) - chi(value - delta)
};

struct SweepConsistency {
  double delta = 0.0;
  std::vector<SweepJump> jumps;
  // Threshold bins where chi changes with no critical value inside.
  std::vector<double> unexplained;

  std::size_t mismatches() const;
  bool consistent() const { return mismatches() == 0 && unexplained.empty(); }
};

// Compares Euler-characteristic jumps of the sampled sublevel sets against
// the signed counts of the given critical points. delta is half the smallest
// gap between distinct critical values. bins > 0 also scans that many
// equal-width threshold bins for jumps no critical value explains.
SweepConsistency sweep_morse_consistency(const Family& family, const std::vector<CriticalPoint>& points,
                                         const GridSpec& grid, int bins = 0);

struct LowerLinkProfile {
  Vector point;
  int components = 0;
  int euler = 0;
  int samples = 0;
};

// Unit directions: evenly spaced on the circle (n = 2), Fibonacci lattice on
// the sphere (n = 3), +-1 (n = 1), seeded Gaussian samples otherwise.
std::vector<Vector> sphere_directions(int dim, int samples);

// Directions of first-order decrease, {v : min_i <g_i, v> < -feasibility},
// sampled on the unit sphere. Directions whose first-order rate is within
// the threshold of zero are decided by comparing f(x + radius v) with f(x).
// samples = 0 picks 3600 (n = 2) or 10^4 (n = 3).
LowerLinkProfile lower_link_profile(const Family& family, const Vector& x, double radius, int samples = 0,
                                    const Tolerances& tol = {});

// True iff some sampled unit direction has every inner product > 1e-9.
bool direction_scan_oracle(const std::vector<Vector>& gradients, int samples);

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& sweep);
void write_profile_csv(std::ostream& out, const std::vector<LowerLinkProfile>& profiles);

}  // namespace mintype
