#include "mintype/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <tuple>

namespace mintype {

bool TrackedFamily::all_matched() const {
  return std::all_of(matches.begin(), matches.end(), [](const TrackMatch& m) { return m.deformed.has_value(); });
}

ScalingVector ScalingDeviation::at(double eps) const {
  ScalingVector scale;
  for (const auto& [index, d] : entries) scale.entries[index] = 1.0 + eps * d;
  return scale;
}

bool ScalingDeviation::is_zero() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second == 0.0; });
}

TrackedFamily perturb_and_track(const Family& family, const ScalingVector& scale, const Box& region,
                                const Tolerances& tol) {
  const Family scaled = apply_scaling(family, scale);
  const Box search = family.is_periodic() ? Box::unit_cell(family.dim()) : region;

  TrackedFamily tracked{family, scale, {}, {}};
  const auto before = find_all_critical(family, search, tol);
  const auto after = find_all_critical(scaled, search, tol);
  const double cap = std::max(10.0 * scale.max_deviation() * search.diameter(), tol.dedup);

  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < before.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    double second = nearest;
    for (std::size_t j = 0; j < after.size(); ++j) {
      if (after[j].index != before[i].index) continue;
      const double d = family.distance(before[i].location, after[j].location);
      if (d > cap) continue;
      pairs.emplace_back(d, i, j);
      if (d < nearest) {
        second = nearest;
        nearest = d;
      } else {
        second = std::min(second, d);
      }
    }
    if (std::isfinite(second) && second - nearest < 1e-7) {
      raise(ErrorCode::MatchingAmbiguous, "two candidates are equally close to the critical point at " +
                                              format_vector(before[i].location));
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<std::optional<std::size_t>> partner(before.size());
  std::vector<bool> taken(after.size(), false);
  for (const auto& [d, i, j] : pairs) {
    if (partner[i] || taken[j]) continue;
    partner[i] = j;
    taken[j] = true;
  }
  for (std::size_t i = 0; i < before.size(); ++i) {
    TrackMatch match{before[i], std::nullopt, 0.0};
    if (partner[i]) {
      match.deformed = after[*partner[i]];
      match.displacement = family.distance(before[i].location, match.deformed->location);
    }
    tracked.matches.push_back(std::move(match));
  }
  for (std::size_t j = 0; j < after.size(); ++j) {
    if (!taken[j]) tracked.unmatched_new.push_back(after[j]);
  }
  return tracked;
}

double stability_radius(const Family& family, const ScalingDeviation& deviation, const Box& region, double eps_max,
                        double resolution, const Tolerances& tol) {
  if (deviation.is_zero()) raise(ErrorCode::InvalidArgument, "deviation must be nonzero");
  if (!(eps_max > 0.0) || !(resolution > 0.0)) raise(ErrorCode::InvalidArgument, "eps_max and resolution must be positive");

  auto intact = [&](double eps) {
    const ScalingVector scale = deviation.at(eps);
    for (const auto& [index, value] : scale.entries) {
      if (!(value > 0.0)) return false;
    }
    // A base point that splits into equidistant candidates has lost its
    // one-to-one correspondence, which counts as a structural change.
    try {
      return perturb_and_track(family, scale, region, tol).structure_preserved();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MatchingAmbiguous) return false;
      throw;
    }
  };

  constexpr int kScanSteps = 50;
  double lo = 0.0, hi = eps_max;
  bool broken = false;
  for (int k = 1; k <= kScanSteps; ++k) {
    const double eps = eps_max * k / kScanSteps;
    if (!intact(eps)) {
      hi = eps;
      broken = true;
      break;
    }
    lo = eps;
  }
  if (!broken) return eps_max;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (intact(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

void write_tracking_csv(std::ostream& out, const TrackedFamily& tracked) {
  const auto n = tracked.base.dim();
  for (int i = 0; i < n; ++i) out << "base_x" << i << ',';
  for (int i = 0; i < n; ++i) out << "deformed_x" << i << ',';
  out << "index,displacement\n";
  const auto precision = out.precision(17);
  auto coords = [&](const std::optional<Vector>& x) {
    for (int i = 0; i < n; ++i) {
      if (x) out << (*x)[i];
      out << ',';
    }
  };
  for (const auto& m : tracked.matches) {
    coords(m.base.location);
    coords(m.deformed ? std::optional<Vector>(m.deformed->location) : std::nullopt);
    out << m.base.index << ',';
    if (m.deformed) out << m.displacement;
    out << '\n';
  }
  for (const auto& cp : tracked.unmatched_new) {
    coords(std::nullopt);
    coords(cp.location);
    out << cp.index << ",\n";
  }
  out.precision(precision);
}

}  // namespace mintype
