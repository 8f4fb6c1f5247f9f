#pragma once

#include "mintype/critical_finder.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace mintype {

struct TrackMatch {
  CriticalPoint base;
  std::optional<CriticalPoint> deformed;
  double displacement = 0.0;
};

// Critical points of a family matched against those of its rescaled copy.
struct TrackedFamily {
  Family base;
  ScalingVector scale;
  std::vector<TrackMatch> matches;
  std::vector<CriticalPoint> unmatched_new;

  bool all_matched() const;
  // Every base point matched and no new points appeared.
  bool structure_preserved() const { return all_matched() && unmatched_new.empty(); }
};

// Finds critical points of the family and of apply_scaling(family, scale),
// then pairs them greedily by distance, requiring equal index and a
// displacement within 10 * |scale - 1|_inf * diam(region).
TrackedFamily perturb_and_track(const Family& family, const ScalingVector& scale, const Box& region,
                                const Tolerances& tol = {});

// Per-piece direction in scaling space; the scale at step eps is 1 + eps * d.
struct ScalingDeviation {
  std::map<std::size_t, double> entries;

  ScalingVector at(double eps) const;
  bool is_zero() const;
};

inline constexpr double kDefaultEpsMax = 0.5;

// Largest eps in (0, eps_max], to within `resolution`, for which scaling by
// 1 + eps * deviation keeps every critical point matched and adds none.
// Scans eps_max / 50 steps for the first break, then bisects.
double stability_radius(const Family& family, const ScalingDeviation& deviation, const Box& region,
                        double eps_max = kDefaultEpsMax, double resolution = 1e-3, const Tolerances& tol = {});

void write_tracking_csv(std::ostream& out, const TrackedFamily& tracked);

}  // namespace mintype
