#include "mintype/levelset_svg.hpp"

#include <sstream>

namespace mintype {

namespace {

std::array<double, 2> crossing(double xa, double ya, double va, double xb, double yb, double vb, double t) {
  const double s = (t - va) / (vb - va);
  return {xa + s * (xb - xa), ya + s * (yb - ya)};
}

}  // namespace

std::vector<Segment> level_set_segments(const Family& family, const Box& region, double threshold, int resolution) {
  if (family.dim() != 2) raise(ErrorCode::InvalidArgument, "level-set rendering needs a two-dimensional family");
  region.check();
  if (resolution < 2) raise(ErrorCode::ResolutionTooCoarse, "need at least 2 cells per axis");
  const auto per = static_cast<std::size_t>(resolution + 1);
  const double hx = (region.hi[0] - region.lo[0]) / resolution;
  const double hy = (region.hi[1] - region.lo[1]) / resolution;
  std::vector<double> values(per * per);
  for (std::size_t j = 0; j < per; ++j) {
    for (std::size_t i = 0; i < per; ++i) {
      Vector x(2);
      x << region.lo[0] + static_cast<double>(i) * hx, region.lo[1] + static_cast<double>(j) * hy;
      values[j * per + i] = evaluate_min(family, x);
    }
  }

  std::vector<Segment> out;
  for (std::size_t j = 0; j + 1 < per; ++j) {
    for (std::size_t i = 0; i + 1 < per; ++i) {
      const double x0 = region.lo[0] + static_cast<double>(i) * hx, x1 = x0 + hx;
      const double y0 = region.lo[1] + static_cast<double>(j) * hy, y1 = y0 + hy;
      // Corners counter-clockwise from bottom-left.
      const double v0 = values[j * per + i], v1 = values[j * per + i + 1];
      const double v2 = values[(j + 1) * per + i + 1], v3 = values[(j + 1) * per + i];
      const int mask = (v0 > threshold) | (v1 > threshold) << 1 | (v2 > threshold) << 2 | (v3 > threshold) << 3;
      if (mask == 0 || mask == 15) continue;
      const auto bottom = [&] { return crossing(x0, y0, v0, x1, y0, v1, threshold); };
      const auto right = [&] { return crossing(x1, y0, v1, x1, y1, v2, threshold); };
      const auto top = [&] { return crossing(x1, y1, v2, x0, y1, v3, threshold); };
      const auto left = [&] { return crossing(x0, y1, v3, x0, y0, v0, threshold); };
      const bool center_high = 0.25 * (v0 + v1 + v2 + v3) > threshold;
      switch (mask) {
        case 1: case 14: out.push_back({left(), bottom()}); break;
        case 2: case 13: out.push_back({bottom(), right()}); break;
        case 3: case 12: out.push_back({left(), right()}); break;
        case 4: case 11: out.push_back({right(), top()}); break;
        case 6: case 9: out.push_back({bottom(), top()}); break;
        case 7: case 8: out.push_back({left(), top()}); break;
        case 5:
          if (center_high) {
            out.push_back({left(), top()});
            out.push_back({bottom(), right()});
          } else {
            out.push_back({left(), bottom()});
            out.push_back({right(), top()});
          }
          break;
        case 10:
          if (center_high) {
            out.push_back({left(), bottom()});
            out.push_back({right(), top()});
          } else {
            out.push_back({left(), top()});
            out.push_back({bottom(), right()});
          }
          break;
        default: break;
      }
    }
  }
  return out;
}

std::string levelset_svg(const Family& family, const Box& region, const std::vector<double>& thresholds,
                         const std::vector<CriticalPoint>& points, const SvgOptions& options) {
  if (family.dim() != 2) raise(ErrorCode::InvalidArgument, "level-set rendering needs a two-dimensional family");
  region.check();
  const double width = options.pixels;
  const double aspect = (region.hi[1] - region.lo[1]) / (region.hi[0] - region.lo[0]);
  const double height = width * aspect;
  auto px = [&](double x) { return (x - region.lo[0]) / (region.hi[0] - region.lo[0]) * width; };
  auto py = [&](double y) { return height - (y - region.lo[1]) / (region.hi[1] - region.lo[1]) * height; };

  static constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  static constexpr const char* kIndexColor[] = {"#2166ac", "#1a9850", "#b2182b", "#762a83"};

  std::ostringstream svg;
  svg.precision(6);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    svg << "  <g stroke=\"" << kPalette[k % 6] << "\" stroke-width=\"1.5\" fill=\"none\">\n"
        << "    <title>f = " << thresholds[k] << "</title>\n    <path d=\"";
    for (const auto& s : level_set_segments(family, region, thresholds[k], options.resolution)) {
      svg << 'M' << px(s.a[0]) << ',' << py(s.a[1]) << 'L' << px(s.b[0]) << ',' << py(s.b[1]);
    }
    svg << "\"/>\n  </g>\n";
  }
  for (const auto& cp : points) {
    const double cx = px(cp.location[0]), cy = py(cp.location[1]);
    const char* color = kIndexColor[std::min(cp.index, 3)];
    svg << "  <circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"4\" fill=\"" << color << "\"/>\n"
        << "  <text x=\"" << cx + 6 << "\" y=\"" << cy - 6 << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << color << "\">" << cp.index << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mintype
