#pragma once

// Slow, independent reference computations used only by the tests. Nothing in
// here calls the library's LP, subset solver, or cubical filtration.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;

// Minimum of w|x - p - z|^2 over every integer shift z with |z|_inf <= reach.
double periodic_min(const std::vector<Vec>& sites, const std::vector<double>& weights, const Vec& x, int reach = 4);

// Gradients 2w(x - p - z) of all translates within `tol` of periodic_min.
std::vector<Vec> periodic_active_gradients(const std::vector<Vec>& sites, const std::vector<double>& weights,
                                           const Vec& x, double tol, int reach = 4);

// Saddle of min{w0|x-a|^2, w1|x-b|^2}: the point on segment ab where both agree.
Vec weighted_bisector_point(const Vec& a, double w0, const Vec& b, double w1);

// Euclidean distance from the origin to the convex hull of the points, by
// enumerating affinely independent subsets (Caratheodory).
double hull_distance(const std::vector<Vec>& points);

// Best max-min inner product over a dense set of unit directions, refined by
// projected subgradient ascent from the best sample.
double scan_max_min_rate(const std::vector<Vec>& gradients, int samples);

// Piecewise-linear critical census of a sampled 2-D function on a Freudenthal
// triangulation. Ties are broken by vertex order. Saddles of multiplicity m
// count m times as index 1.
struct Census {
  std::array<long, 3> count{};
  long euler() const { return count[0] - count[1] + count[2]; }
};
Census pl_census_2d(const std::function<double(double, double)>& f, std::array<double, 2> lo,
                    std::array<double, 2> hi, int resolution, bool periodic, std::array<double, 2> offset);

// PL census that also returns vertex locations of the critical vertices.
struct CensusPoint {
  double x, y, value;
  int index;
};
std::vector<CensusPoint> pl_critical_vertices_2d(const std::function<double(double, double)>& f,
                                                 std::array<double, 2> lo, std::array<double, 2> hi, int resolution,
                                                 bool periodic, std::array<double, 2> offset);

}  // namespace oracle
