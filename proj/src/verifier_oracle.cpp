#include "mintype/verifier_oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

namespace mintype {

GridSpec GridSpec::for_family(const Family& family, const Box& region) {
  GridSpec spec;
  spec.periodic = family.is_periodic();
  spec.region = spec.periodic ? Box::unit_cell(family.dim()) : region;
  spec.resolution = family.dim() >= 3 ? 64 : 256;
  return spec;
}

GridSample GridSample::sample(const Family& family, const GridSpec& spec) {
  spec.region.check();
  if (spec.region.dim() != family.dim()) raise(ErrorCode::DimensionMismatch, "grid region dimension");
  if (spec.resolution < 16) {
    raise(ErrorCode::ResolutionTooCoarse, "grid resolution " + std::to_string(spec.resolution) + " is below 16");
  }
  GridSample grid;
  grid.spec_ = spec;
  grid.dim_ = family.dim();
  grid.per_axis_ = spec.periodic ? spec.resolution : spec.resolution + 1;
  std::size_t total = 1;
  for (int i = 0; i < grid.dim_; ++i) total *= static_cast<std::size_t>(grid.per_axis_);
  grid.values_.resize(total);
  grid.owner_.resize(total);
  std::map<PieceId, std::uint32_t> owner_index;
  for (std::size_t v = 0; v < total; ++v) {
    const Vector x = grid.vertex(v);
    double best = std::numeric_limits<double>::infinity();
    PieceId arg;
    for (const auto& id : family.local_pieces(x)) {
      const double value = family.piece(id).value(x);
      if (value < best) {
        best = value;
        arg = id;
      }
    }
    if (!std::isfinite(best)) raise(ErrorCode::InvalidArgument, "non-finite value on grid");
    grid.values_[v] = best;
    const auto [it, fresh] = owner_index.emplace(arg, static_cast<std::uint32_t>(grid.owner_ids_.size()));
    if (fresh) grid.owner_ids_.push_back(arg);
    grid.owner_[v] = it->second;
  }
  return grid;
}

Vector GridSample::vertex(std::size_t linear) const {
  Vector x(dim_);
  const Vector step = (spec_.region.hi - spec_.region.lo) / spec_.resolution;
  for (int i = 0; i < dim_; ++i) {
    const auto coord = linear % static_cast<std::size_t>(per_axis_);
    linear /= static_cast<std::size_t>(per_axis_);
    x[i] = spec_.region.lo[i] + static_cast<double>(coord) * step[i];
  }
  return x;
}

double GridSample::max_step() const {
  double worst = 0.0;
  std::size_t stride = 1;
  const auto per = static_cast<std::size_t>(per_axis_);
  for (int axis = 0; axis < dim_; ++axis) {
    for (std::size_t v = 0; v < values_.size(); ++v) {
      const std::size_t coord = (v / stride) % per;
      std::size_t w;
      if (coord + 1 < per) w = v + stride;
      else if (spec_.periodic) w = v + stride - per * stride;
      else continue;
      worst = std::max(worst, std::abs(values_[v] - values_[w]));
    }
    stride *= per;
  }
  return worst;
}

namespace {

// Piece restricted to a face x = o + sum_k y_k e_{axes[k]}:
// q(y) = y'Qy + beta'y + gamma.
struct FacePiece {
  Matrix Q;
  Vector beta;
  double gamma;
};

FacePiece restrict_to_face(const ConvexQuadratic& q, const Vector& origin, const std::vector<int>& axes) {
  const auto d = static_cast<Eigen::Index>(axes.size());
  const Vector full = q.gradient(origin);
  FacePiece fp{Matrix(d, d), Vector(d), q.value(origin)};
  for (Eigen::Index a = 0; a < d; ++a) {
    fp.beta[a] = full[axes[static_cast<std::size_t>(a)]];
    for (Eigen::Index b = 0; b < d; ++b) fp.Q(a, b) = q.A(axes[static_cast<std::size_t>(a)], axes[static_cast<std::size_t>(b)]);
  }
  return fp;
}

double face_min(const std::vector<FacePiece>& pieces, const Vector& y) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) best = std::min(best, y.dot(p.Q * y) + p.beta.dot(y) + p.gamma);
  return best;
}

bool same_hessian(const FacePiece& a, const FacePiece& b) {
  return (a.Q - b.Q).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, a.Q.cwiseAbs().maxCoeff());
}

// Largest value of min_i q_i over the relative interior of a face with
// extents h, or -inf when the maximum can only sit on the face boundary.
//
// On an edge the maximum of a minimum of convex parabolas is at a crossing.
// On higher faces with a shared Hessian, each piece's region is a convex
// polytope and the maximum is at one of its vertices, where d + 1 pieces
// agree. Other faces are sampled on a sub-lattice.
double face_interior_sup(const std::vector<FacePiece>& pieces, const Vector& h) {
  const auto d = h.size();
  const std::size_t k = pieces.size();
  double best = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& y) {
    for (Eigen::Index a = 0; a < d; ++a) {
      if (!(y[a] > 0.0 && y[a] < h[a])) return;
    }
    best = std::max(best, face_min(pieces, y));
  };

  if (d == 1) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const double qa = pieces[i].Q(0, 0) - pieces[j].Q(0, 0);
        const double qb = pieces[i].beta[0] - pieces[j].beta[0];
        const double qc = pieces[i].gamma - pieces[j].gamma;
        Vector y(1);
        if (std::abs(qa) <= 1e-14 * std::max(1.0, std::abs(pieces[i].Q(0, 0)))) {
          if (qb == 0.0) continue;
          y[0] = -qc / qb;
          consider(y);
          continue;
        }
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0) continue;
        const double root = std::sqrt(disc);
        // Numerically stable pair of roots.
        const double qq = -0.5 * (qb + std::copysign(root, qb));
        if (qq != 0.0) {
          y[0] = qc / qq;
          consider(y);
        }
        y[0] = qq / qa;
        consider(y);
      }
    }
    return best;
  }

  bool shared = true;
  for (std::size_t i = 1; i < k && shared; ++i) shared = same_hessian(pieces[0], pieces[i]);
  if (!shared) {
    constexpr int kSub = 8;
    std::vector<int> m(static_cast<std::size_t>(d), 1);
    while (true) {
      Vector y(d);
      for (Eigen::Index a = 0; a < d; ++a) y[a] = h[a] * m[static_cast<std::size_t>(a)] / kSub;
      consider(y);
      std::size_t a = 0;
      while (a < m.size() && m[a] == kSub - 1) m[a++] = 1;
      if (a == m.size()) break;
      ++m[a];
    }
  }
  // Vertices where d + 1 pieces agree (exact when Hessians are shared).
  if (k < static_cast<std::size_t>(d) + 1) return best;
  std::vector<std::size_t> pick(static_cast<std::size_t>(d) + 1);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    const auto& p0 = pieces[pick[0]];
    bool usable = true;
    Matrix m(d, d);
    Vector rhs(d);
    for (Eigen::Index r = 0; r < d; ++r) {
      const auto& pr = pieces[pick[static_cast<std::size_t>(r) + 1]];
      if (!same_hessian(p0, pr)) {
        usable = false;
        break;
      }
      m.row(r) = (p0.beta - pr.beta).transpose();
      rhs[r] = pr.gamma - p0.gamma;
    }
    if (usable) {
      Eigen::FullPivLU<Matrix> lu(m);
      if (lu.rank() == d) consider(lu.solve(rhs));
    }
    // Next combination in lexicographic order.
    auto i = static_cast<std::ptrdiff_t>(pick.size()) - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == k - pick.size() + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

bool shared_hessians(const Family& family) {
  const auto& pieces = family.base_pieces();
  for (const auto& p : pieces) {
    if ((p.A - pieces.front().A).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, pieces.front().A.cwiseAbs().maxCoeff())) {
      return false;
    }
  }
  return true;
}

struct GridLayout {
  int n;
  std::size_t per;
  bool periodic;
  std::vector<std::size_t> stride;

  // Neighbour of v one step along axis, or npos off a non-periodic grid.
  std::size_t step(std::size_t v, int axis) const {
    const auto s = stride[static_cast<std::size_t>(axis)];
    const std::size_t coord = (v / s) % per;
    if (coord + 1 < per) return v + s;
    if (periodic) return v + s - per * s;
    return npos;
  }
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

std::vector<double> sorted_union(std::vector<std::vector<double>>& tags, bool even) {
  std::vector<double> out;
  for (std::size_t mask = 0; mask < tags.size(); ++mask) {
    if ((std::popcount(mask) % 2 == 0) != even) continue;
    for (double m : tags[mask]) {
      if (!std::isnan(m)) out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// tag[mask][v]: value of the face spanned from vertex v by the axes in mask,
// NaN where the face would leave a non-periodic grid. A face's tag is the
// largest of its facets' tags and its own interior supremum.
std::vector<std::vector<double>> face_tags(const GridLayout& g, const std::vector<double>& vertex_values,
                                           const std::vector<std::vector<double>>* interior) {
  const std::size_t masks = std::size_t{1} << g.n;
  const std::size_t count = vertex_values.size();
  const double absent = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> tag(masks);
  tag[0] = vertex_values;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    auto& cur = tag[mask];
    cur.assign(count, absent);
    for (std::size_t v = 0; v < count; ++v) {
      double value = -std::numeric_limits<double>::infinity();
      bool inside = true;
      for (int axis = 0; axis < g.n && inside; ++axis) {
        if (!(mask & (std::size_t{1} << axis))) continue;
        const std::size_t w = g.step(v, axis);
        const auto& facet = tag[mask ^ (std::size_t{1} << axis)];
        if (w == GridLayout::npos || std::isnan(facet[v]) || std::isnan(facet[w])) {
          inside = false;
          break;
        }
        value = std::max({value, facet[v], facet[w]});
      }
      if (!inside) continue;
      if (interior && !(*interior)[mask].empty()) value = std::max(value, (*interior)[mask][v]);
      cur[v] = value;
    }
  }
  return tag;
}

GridLayout layout_of(int n, int per_axis, bool periodic) {
  GridLayout g{n, static_cast<std::size_t>(per_axis), periodic, {}};
  for (int i = 0; i < n; ++i) g.stride.push_back(i == 0 ? 1 : g.stride.back() * g.per);
  return g;
}

}  // namespace

CubicalFiltration::CubicalFiltration(const GridSample& grid) {
  const auto g = layout_of(grid.dim_, grid.per_axis_, grid.spec_.periodic);
  auto tags = face_tags(g, grid.values_, nullptr);
  even_ = sorted_union(tags, true);
  odd_ = sorted_union(tags, false);
}

CubicalFiltration::CubicalFiltration(const Family& family, const GridSample& grid) {
  const int n = grid.dim_;
  if (family.dim() != n) raise(ErrorCode::DimensionMismatch, "family and grid dimensions differ");
  const auto g = layout_of(n, grid.per_axis_, grid.spec_.periodic);
  const std::size_t count = grid.values_.size();
  const std::size_t masks = std::size_t{1} << n;
  const Vector h = (grid.spec_.region.hi - grid.spec_.region.lo) / grid.spec_.resolution;
  const bool convex_regions = shared_hessians(family);

  std::vector<std::vector<double>> interior(masks);
  for (std::size_t mask = 1; mask < masks; ++mask) {
    interior[mask].assign(count, -std::numeric_limits<double>::infinity());
  }

  std::vector<std::size_t> corner(masks);
  for (std::size_t v = 0; v < count; ++v) {
    // Corners of the top cell anchored at v.
    bool complete = true;
    corner[0] = v;
    for (std::size_t mask = 1; mask < masks && complete; ++mask) {
      int axis = 0;
      while (!(mask & (std::size_t{1} << axis))) ++axis;
      corner[mask] = g.step(corner[mask ^ (std::size_t{1} << axis)], axis);
      complete = corner[mask] != GridLayout::npos;
    }
    if (!complete) continue;
    if (convex_regions) {
      // Shared Hessians make every piece's region convex, so a cell whose
      // corners share a minimizer lies inside that region.
      bool uniform = true;
      for (std::size_t c = 1; c < masks && uniform; ++c) uniform = grid.owner_[corner[c]] == grid.owner_[v];
      if (uniform) continue;
    }

    // Pieces that can be minimal somewhere in the cell.
    const Vector lo = grid.vertex(v);
    const Vector center = lo + 0.5 * h;
    std::vector<ConvexQuadratic> nearby;
    for (const auto& id : family.local_pieces(center)) nearby.push_back(family.piece(id));
    double upper = std::numeric_limits<double>::infinity();
    for (const auto& q : nearby) {
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < masks; ++c) {
        Vector x = lo;
        for (int axis = 0; axis < n; ++axis) {
          if (c & (std::size_t{1} << axis)) x[axis] += h[axis];
        }
        top = std::max(top, q.value(x));
      }
      upper = std::min(upper, top);
    }
    std::vector<ConvexQuadratic> relevant;
    for (const auto& q : nearby) {
      const double lower = q.value(center) - 0.5 * q.gradient(center).cwiseAbs().dot(h);
      if (lower <= upper + 1e-12 * std::max(1.0, std::abs(upper))) relevant.push_back(q);
    }
    if (relevant.size() < 2) continue;

    // Every face of the cell: axes in `mask` span, the rest sit at offset `shift`.
    for (std::size_t mask = 1; mask < masks; ++mask) {
      std::vector<int> axes;
      for (int axis = 0; axis < n; ++axis) {
        if (mask & (std::size_t{1} << axis)) axes.push_back(axis);
      }
      Vector extent(static_cast<Eigen::Index>(axes.size()));
      for (std::size_t a = 0; a < axes.size(); ++a) extent[static_cast<Eigen::Index>(a)] = h[axes[a]];
      const std::size_t free_axes = (masks - 1) ^ mask;
      for (std::size_t shift = free_axes;; shift = (shift - 1) & free_axes) {
        Vector origin = lo;
        for (int axis = 0; axis < n; ++axis) {
          if (shift & (std::size_t{1} << axis)) origin[axis] += h[axis];
        }
        std::vector<FacePiece> restricted;
        restricted.reserve(relevant.size());
        for (const auto& q : relevant) restricted.push_back(restrict_to_face(q, origin, axes));
        auto& slot = interior[mask][corner[shift]];
        slot = std::max(slot, face_interior_sup(restricted, extent));
        if (shift == 0) break;
      }
    }
  }

  auto tags = face_tags(g, grid.values_, &interior);
  even_ = sorted_union(tags, true);
  odd_ = sorted_union(tags, false);
}

long CubicalFiltration::euler(double t) const {
  const auto e = std::upper_bound(even_.begin(), even_.end(), t) - even_.begin();
  const auto o = std::upper_bound(odd_.begin(), odd_.end(), t) - odd_.begin();
  return static_cast<long>(e - o);
}

std::vector<SweepPoint> euler_sweep(const CubicalFiltration& filtration, const std::vector<double>& thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    raise(ErrorCode::InvalidArgument, "thresholds must be sorted ascending");
  }
  std::vector<SweepPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) out.push_back(SweepPoint{t, filtration.euler(t)});
  return out;
}

std::vector<SweepPoint> euler_sweep(const Family& family, const GridSpec& grid, const std::vector<double>& thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    raise(ErrorCode::InvalidArgument, "thresholds must be sorted ascending");
  }
  return euler_sweep(CubicalFiltration(family, GridSample::sample(family, grid)), thresholds);
}

std::size_t SweepConsistency::mismatches() const {
  return static_cast<std::size_t>(
      std::count_if(jumps.begin(), jumps.end(), [](const SweepJump& j) { return j.expected != j.observed; }));
}

SweepConsistency sweep_morse_consistency(const Family& family, const std::vector<CriticalPoint>& points,
                                         const GridSpec& grid_spec, int bins) {
  const GridSample grid = GridSample::sample(family, grid_spec);
  const CubicalFiltration filtration(family, grid);
  const auto [lo_it, hi_it] = std::minmax_element(grid.values().begin(), grid.values().end());
  const double grid_lo = *lo_it, grid_hi = *hi_it;

  SweepConsistency report;
  std::vector<SweepJump> groups;
  std::vector<CriticalPoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  for (const auto& cp : sorted) {
    const long sign = cp.index % 2 == 0 ? 1 : -1;
    if (!groups.empty() && cp.value - groups.back().value <= 1e-9 * std::max(1.0, std::abs(cp.value))) {
      groups.back().expected += sign;
    } else {
      groups.push_back(SweepJump{cp.value, sign, 0});
    }
  }
  if (groups.empty()) return report;

  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < groups.size(); ++i) gap = std::min(gap, groups[i].value - groups[i - 1].value);
  report.delta = std::isfinite(gap) ? 0.5 * gap : 0.25 * std::max(grid_hi - grid_lo, 1e-6);
  const double step = grid.max_step();
  for (auto& g : groups) {
    g.observed = filtration.euler(g.value + report.delta) - filtration.euler(g.value - report.delta);
  }
  // A window narrower than the grid's value step cannot tell a wrong count
  // from a discretization artifact, so a mismatch there is inconclusive.
  const bool mismatch =
      std::any_of(groups.begin(), groups.end(), [](const SweepJump& g) { return g.observed != g.expected; });
  if (mismatch && report.delta < 0.5 * step) {
    raise(ErrorCode::ResolutionTooCoarse, "critical values " + std::to_string(2.0 * report.delta) +
                                              " apart are not resolved by grid steps of " + std::to_string(step));
  }
  report.jumps = std::move(groups);

  if (bins > 0) {
    const double t0 = grid_lo - 1e-9, t1 = grid_hi + 1e-9;
    const double width = (t1 - t0) / bins;
    long previous = filtration.euler(t0);
    for (int b = 1; b <= bins; ++b) {
      const double edge = t0 + b * width;
      const long chi = filtration.euler(edge);
      if (chi != previous) {
        const double lo = edge - width - step, hi = edge + step;
        const bool explained = std::any_of(report.jumps.begin(), report.jumps.end(),
                                           [&](const SweepJump& j) { return j.value >= lo && j.value <= hi; });
        if (!explained) report.unexplained.push_back(edge - 0.5 * width);
      }
      previous = chi;
    }
  }
  return report;
}

std::vector<Vector> sphere_directions(int dim, int samples) {
  std::vector<Vector> dirs;
  if (dim < 1 || samples < 1) raise(ErrorCode::InvalidArgument, "need a positive dimension and sample count");
  if (dim == 1) {
    dirs.push_back(Vector::Constant(1, 1.0));
    dirs.push_back(Vector::Constant(1, -1.0));
    return dirs;
  }
  dirs.reserve(static_cast<std::size_t>(samples));
  if (dim == 2) {
    for (int i = 0; i < samples; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / samples;
      Vector v(2);
      v << std::cos(angle), std::sin(angle);
      dirs.push_back(std::move(v));
    }
  } else if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < samples; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / samples;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vector v(3);
      v << r * std::cos(golden * i), r * std::sin(golden * i), z;
      dirs.push_back(std::move(v));
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    for (int i = 0; i < samples; ++i) {
      Vector v(dim);
      for (int j = 0; j < dim; ++j) v[j] = normal(rng);
      dirs.push_back(v.normalized());
    }
  }
  return dirs;
}

bool direction_scan_oracle(const std::vector<Vector>& gradients, int samples) {
  if (gradients.empty()) raise(ErrorCode::EmptyGradientList, "no gradients");
  if (samples < 360) raise(ErrorCode::InvalidArgument, "direction scan needs at least 360 samples");
  const int n = static_cast<int>(gradients.front().size());
  for (const auto& v : sphere_directions(n, samples)) {
    bool all_positive = true;
    for (const auto& g : gradients) {
      if (!(g.dot(v) > 1e-9)) {
        all_positive = false;
        break;
      }
    }
    if (all_positive) return true;
  }
  return false;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

// Largest value of min_i <g_i, u + s (w - u)> over s in [0, 1]. The function
// is concave and piecewise linear in s, so its maximum sits at an endpoint
// or where two of the lines cross.
double max_rate_on_chord(const std::vector<Vector>& gradients, const Vector& u, const Vector& w) {
  const std::size_t k = gradients.size();
  std::vector<double> alpha(k), beta(k);
  for (std::size_t i = 0; i < k; ++i) {
    alpha[i] = gradients[i].dot(u);
    beta[i] = gradients[i].dot(w - u);
  }
  auto rate = [&](double s) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) r = std::min(r, alpha[i] + s * beta[i]);
    return r;
  };
  double best = std::max(rate(0.0), rate(1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double db = beta[i] - beta[j];
      if (db == 0.0) continue;
      const double s = (alpha[j] - alpha[i]) / db;
      if (s > 0.0 && s < 1.0) best = std::max(best, rate(s));
    }
  }
  return best;
}

struct SampledLink {
  int components = 0;
  int euler = 0;
};

SampledLink sample_lower_link(const Family& family, const ActiveSet& active, double radius, int samples,
                              const Tolerances& tol) {
  const int n = family.dim();
  const auto gradients = active.gradients();
  const auto dirs = sphere_directions(n, samples);
  const std::size_t count = dirs.size();

  // 1 = first-order decrease, 0 = not decreasing, 2 = decided by the value probe.
  std::vector<int> state(count);
  std::vector<bool> inside(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = directional_derivative(gradients, dirs[i]);
    if (r < -tol.feasibility) {
      state[i] = 1;
      inside[i] = true;
    } else if (r > tol.feasibility) {
      state[i] = 0;
    } else {
      state[i] = 2;
      inside[i] = evaluate_min(family, active.point + radius * dirs[i]) < active.value;
    }
  }

  auto link_inside = [&](std::size_t a, std::size_t b) {
    if (!inside[a] || !inside[b]) return false;
    if (state[a] == 1 && state[b] == 1) return max_rate_on_chord(gradients, dirs[a], dirs[b]) < -tol.feasibility;
    return true;
  };

  // Neighbour pairs of the sampling pattern.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (n == 2) {
    for (std::size_t i = 0; i < count; ++i) edges.emplace_back(i, (i + 1) % count);
  } else if (n == 3) {
    const double reach = 2.2 * std::sqrt(4.0 * std::numbers::pi / static_cast<double>(count));
    const double cell = reach;
    auto key = [&](const Vector& v) {
      const auto cx = static_cast<long>(std::floor((v[0] + 1.0) / cell));
      const auto cy = static_cast<long>(std::floor((v[1] + 1.0) / cell));
      const auto cz = static_cast<long>(std::floor((v[2] + 1.0) / cell));
      return std::array<long, 3>{cx, cy, cz};
    };
    auto hash = [](const std::array<long, 3>& k) { return (k[0] * 73856093L) ^ (k[1] * 19349663L) ^ (k[2] * 83492791L); };
    std::unordered_map<long, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < count; ++i) buckets[hash(key(dirs[i]))].push_back(i);
    for (std::size_t i = 0; i < count; ++i) {
      const auto k = key(dirs[i]);
      for (long dx = -1; dx <= 1; ++dx) {
        for (long dy = -1; dy <= 1; ++dy) {
          for (long dz = -1; dz <= 1; ++dz) {
            auto it = buckets.find(hash({k[0] + dx, k[1] + dy, k[2] + dz}));
            if (it == buckets.end()) continue;
            for (std::size_t j : it->second) {
              if (j > i && (dirs[i] - dirs[j]).norm() <= reach) edges.emplace_back(i, j);
            }
          }
        }
      }
    }
  } else if (n > 3) {
    raise(ErrorCode::InvalidArgument, "lower-link profiles support dimensions 1 to 3");
  }

  DisjointSets in_sets(count), out_sets(count);
  std::size_t broken_inside_edges = 0;
  for (auto [a, b] : edges) {
    if (inside[a] && inside[b]) {
      if (link_inside(a, b)) in_sets.unite(static_cast<int>(a), static_cast<int>(b));
      else ++broken_inside_edges;
    } else if (!inside[a] && !inside[b]) {
      out_sets.unite(static_cast<int>(a), static_cast<int>(b));
    }
  }
  int in_components = 0, out_components = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (inside[i] && in_sets.find(static_cast<int>(i)) == static_cast<int>(i)) ++in_components;
    if (!inside[i] && out_sets.find(static_cast<int>(i)) == static_cast<int>(i)) ++out_components;
  }

  SampledLink link;
  link.components = in_components;
  if (in_components == 0) return link;
  if (n == 1) {
    link.euler = in_components;
  } else if (n == 2) {
    // Arcs are contractible; only the unbroken full circle has chi 0.
    const bool full = out_components == 0 && broken_inside_edges == 0;
    link.euler = full ? 0 : in_components;
  } else {
    if (out_components == 0) {
      link.euler = (in_components == 1 && broken_inside_edges == 0) ? 2 : in_components;
    } else {
      // Alexander duality on S^2: b1(A) = #components(S^2 \ A) - 1.
      link.euler = in_components - (out_components - 1);
    }
  }
  return link;
}

}  // namespace

LowerLinkProfile lower_link_profile(const Family& family, const Vector& x, double radius, int samples,
                                    const Tolerances& tol) {
  if (!(radius > 0.0)) raise(ErrorCode::InvalidArgument, "radius must be positive");
  const int n = family.dim();
  if (samples <= 0) samples = n == 3 ? 10000 : 3600;
  if ((n == 2 && samples < 360) || (n == 3 && samples < 10000)) {
    raise(ErrorCode::InvalidArgument, "too few direction samples for a lower-link profile");
  }
  const auto active = active_set(family, x, std::nullopt, tol);
  const auto base = sample_lower_link(family, active, radius, samples, tol);
  const auto doubled = sample_lower_link(family, active, radius, 2 * samples, tol);
  if (base.components != doubled.components || base.euler != doubled.euler) {
    raise(ErrorCode::InconclusiveProfile, "lower link at " + format_vector(x) + " changes from " +
                                              std::to_string(base.components) + " to " +
                                              std::to_string(doubled.components) + " components when resampled");
  }
  LowerLinkProfile profile;
  profile.point = x;
  profile.components = base.components;
  profile.euler = base.euler;
  profile.samples = samples;
  return profile;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& sweep) {
  out << "t,chi\n";
  const auto precision = out.precision(17);
  for (const auto& p : sweep) out << p.t << ',' << p.chi << '\n';
  out.precision(precision);
}

void write_profile_csv(std::ostream& out, const std::vector<LowerLinkProfile>& profiles) {
  if (profiles.empty()) return;
  const auto n = profiles.front().point.size();
  for (Eigen::Index i = 0; i < n; ++i) out << 'x' << i << ',';
  out << "components,euler\n";
  const auto precision = out.precision(17);
  for (const auto& p : profiles) {
    for (Eigen::Index i = 0; i < n; ++i) out << p.point[i] << ',';
    out << p.components << ',' << p.euler << '\n';
  }
  out.precision(precision);
}

}  // namespace mintype
