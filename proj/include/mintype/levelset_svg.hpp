#pragma once

#include "mintype/critical_finder.hpp"

#include <array>
#include <string>
#include <vector>

namespace mintype {

struct Segment {
  std::array<double, 2> a;
  std::array<double, 2> b;
};

// Marching squares on a regular grid over a 2-D region.
std::vector<Segment> level_set_segments(const Family& family, const Box& region, double threshold, int resolution);

struct SvgOptions {
  int resolution = 256;
  int pixels = 512;
};

// Static SVG 1.1 drawing of the level sets at the given thresholds, with
// critical points marked and labelled by index. Two-dimensional families only.
std::string levelset_svg(const Family& family, const Box& region, const std::vector<double>& thresholds,
                         const std::vector<CriticalPoint>& points, const SvgOptions& options = {});

}  // namespace mintype
