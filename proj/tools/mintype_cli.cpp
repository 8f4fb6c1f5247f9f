// mintype: command-line front end for Min-type function analysis.

#include "mintype/classifier.hpp"
#include "mintype/critical_finder.hpp"
#include "mintype/deformation.hpp"
#include "mintype/family_io.hpp"
#include "mintype/levelset_svg.hpp"
#include "mintype/verifier_oracle.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using mintype::Box;
using mintype::ErrorCode;
using mintype::Family;
using mintype::Vector;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;
constexpr int kExitParse = 3;
constexpr int kExitInconsistent = 4;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_number(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) mintype::raise(ErrorCode::InvalidArgument, "not a number: '" + text + "'");
  return value;
}

std::vector<double> number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_number(item));
  return out;
}

Vector point_arg(const std::string& text, int dim) {
  const auto values = number_list(text);
  if (static_cast<int>(values.size()) != dim) {
    mintype::raise(ErrorCode::InvalidArgument, "point needs " + std::to_string(dim) + " coordinates");
  }
  return Eigen::Map<const Vector>(values.data(), dim);
}

// "lo,hi" for a cube or "lo0,hi0,lo1,hi1,..." per axis.
Box region_arg(const std::string& text, const Family& family) {
  const int n = family.dim();
  if (text.empty()) return mintype::default_region(family);
  const auto values = number_list(text);
  Box box{Vector(n), Vector(n)};
  if (values.size() == 2) {
    box = Box::cube(n, values[0], values[1]);
  } else if (static_cast<int>(values.size()) == 2 * n) {
    for (int i = 0; i < n; ++i) {
      box.lo[i] = values[static_cast<std::size_t>(2 * i)];
      box.hi[i] = values[static_cast<std::size_t>(2 * i + 1)];
    }
  } else {
    mintype::raise(ErrorCode::InvalidArgument, "region needs 2 or " + std::to_string(2 * n) + " numbers");
  }
  box.check();
  return box;
}

// "1.1,0.9" (positional) or "0:1.1,1:0.9" (indexed).
std::map<std::size_t, double> index_map_arg(const std::string& text) {
  std::map<std::size_t, double> out;
  std::size_t position = 0;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out[position++] = to_number(item);
    } else {
      const double index = to_number(item.substr(0, colon));
      if (index < 0 || index != static_cast<double>(static_cast<std::size_t>(index))) {
        mintype::raise(ErrorCode::InvalidArgument, "bad piece index in '" + item + "'");
      }
      out[static_cast<std::size_t>(index)] = to_number(item.substr(colon + 1));
    }
  }
  return out;
}

std::string coords(const Vector& x) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
  return out.str();
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) mintype::raise(ErrorCode::InvalidArgument, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct Options {
  std::string family_path;
  std::string point;
  std::string region;
  std::string output;
  std::string scale;
  std::string deviation;
  std::string thresholds;
  std::string emit;
  mintype::Tolerances tol;
  double active_tol = 0.0;
  double radius = 1e-3;
  double eps_max = mintype::kDefaultEpsMax;
  double eps_resolution = 1e-3;
  double from = 0.0;
  double to = 1.0;
  int steps = 100;
  int resolution = 0;
  int samples = 0;
  bool verify = false;
};

// Expected lower-link component count for a verdict in dimension n.
int expected_components(const mintype::Classification& c, int n) {
  if (c.verdict != mintype::Verdict::Critical) return 1;
  if (c.index == 0) return 0;
  if (c.index == 1) return 2;
  return n >= 2 ? 1 : 2;
}

int run_validate(const Options& o) {
  const auto parsed = mintype::parse_family_text(
      [&] {
        std::ifstream in(o.family_path);
        if (!in) mintype::raise(ErrorCode::ParseError, o.family_path + ": cannot open file");
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
      }(),
      o.family_path);
  const auto report = mintype::validate_family(parsed.family);
  std::cout << "kind: " << mintype::to_string(parsed.family.kind()) << "\n"
            << "dim: " << parsed.family.dim() << "\n"
            << "pieces: " << parsed.family.base_count() << "\n";
  for (const auto& p : report.pieces) {
    std::cout << "piece " << p.index << ": symmetric=" << (p.symmetric ? "yes" : "no")
              << " positive_definite=" << (p.positive_definite ? "yes" : "no") << " eigenvalues=[" << p.min_eigenvalue
              << ", " << p.max_eigenvalue << "]\n";
  }
  std::cout << "locality: " << (report.locality_ok ? "ok" : "failed") << " (" << report.locality_probes
            << " probes)\n";
  if (!report.usable()) {
    std::cout << "usable: no\nerror: " << mintype::to_string(*report.failure) << ": " << report.detail << "\n";
    return kExitValidation;
  }
  const Family family =
      parsed.scaling.entries.empty() ? parsed.family : mintype::apply_scaling(parsed.family, parsed.scaling);
  std::cout << "usable: yes\n";
  if (!o.emit.empty()) mintype::write_family_file(o.emit, family);
  return kExitOk;
}

int run_eval(const Family& family, const Options& o) {
  std::cout.precision(17);
  std::cout << mintype::evaluate_min(family, point_arg(o.point, family.dim())) << "\n";
  return kExitOk;
}

int run_classify(const Family& family, const Options& o) {
  const Vector x = point_arg(o.point, family.dim());
  const auto c = mintype::classify_point(family, x, o.active_tol > 0 ? std::optional(o.active_tol) : std::nullopt, o.tol);
  std::cout.precision(17);
  std::cout << "point: " << coords(x) << "\n"
            << "value: " << c.active.value << "\n"
            << "verdict: " << mintype::to_string(c.verdict) << "\n";
  if (c.is_critical()) std::cout << "index: " << c.index << "\n";
  std::cout << "span_rank: " << c.span_rank << "\n"
            << "active:";
  for (const auto& m : c.active.members) std::cout << ' ' << mintype::format_piece(m.id);
  std::cout << "\n";
  if (!c.lambda.empty()) {
    std::cout << "lambda:";
    for (double l : c.lambda) std::cout << ' ' << l;
    std::cout << "\n";
  }
  if (c.direction) std::cout << "direction: " << coords(*c.direction) << "\n";
  std::cout << "margin: " << c.margin << "\n";
  if (o.verify) {
    const auto profile = mintype::lower_link_profile(family, x, o.radius, o.samples, o.tol);
    const int expected = expected_components(c, family.dim());
    std::cout << "lower_link_components: " << profile.components << " (expected " << expected << ")\n";
    if (profile.components != expected) return kExitInconsistent;
  }
  return kExitOk;
}

int run_find_critical(const Family& family, const Options& o) {
  const Box region = region_arg(o.region, family);
  const auto points = mintype::find_all_critical(family, region, o.tol);
  Output out(o.output);
  auto& s = out.stream();
  s.precision(17);
  for (int i = 0; i < family.dim(); ++i) s << 'x' << i << ',';
  s << "value,index\n";
  for (const auto& cp : points) s << coords(cp.location) << ',' << cp.value << ',' << cp.index << '\n';
  if (o.verify) {
    auto grid = mintype::GridSpec::for_family(family, region);
    if (o.resolution > 0) grid.resolution = o.resolution;
    const auto report = mintype::sweep_morse_consistency(family, points, grid, 200);
    for (const auto& j : report.jumps) {
      std::cerr << "critical value " << j.value << ": expected jump " << j.expected << ", observed " << j.observed
                << "\n";
    }
    for (double t : report.unexplained) std::cerr << "unexplained Euler jump near " << t << "\n";
    if (!report.consistent()) return kExitInconsistent;
  }
  return kExitOk;
}

int run_euler_sweep(const Family& family, const Options& o) {
  const Box region = region_arg(o.region, family);
  auto grid = mintype::GridSpec::for_family(family, region);
  if (o.resolution > 0) grid.resolution = o.resolution;
  std::vector<double> thresholds;
  if (!o.thresholds.empty()) {
    thresholds = number_list(o.thresholds);
  } else {
    if (o.steps < 1) mintype::raise(ErrorCode::InvalidArgument, "--steps must be positive");
    for (int i = 0; i <= o.steps; ++i) thresholds.push_back(o.from + (o.to - o.from) * i / o.steps);
  }
  Output out(o.output);
  mintype::write_sweep_csv(out.stream(), mintype::euler_sweep(family, grid, thresholds));
  return kExitOk;
}

int run_lower_link(const Family& family, const Options& o) {
  const auto profile = mintype::lower_link_profile(family, point_arg(o.point, family.dim()), o.radius, o.samples, o.tol);
  Output out(o.output);
  mintype::write_profile_csv(out.stream(), {profile});
  return kExitOk;
}

int run_perturb(const Family& family, const Options& o) {
  mintype::ScalingVector scale{index_map_arg(o.scale)};
  const auto tracked = mintype::perturb_and_track(family, scale, region_arg(o.region, family), o.tol);
  Output out(o.output);
  mintype::write_tracking_csv(out.stream(), tracked);
  return kExitOk;
}

int run_stability(const Family& family, const Options& o) {
  mintype::ScalingDeviation deviation{index_map_arg(o.deviation)};
  const double radius =
      mintype::stability_radius(family, deviation, region_arg(o.region, family), o.eps_max, o.eps_resolution, o.tol);
  std::cout.precision(17);
  std::cout << radius << "\n";
  return kExitOk;
}

int run_levelset_svg(const Family& family, const Options& o) {
  const Box region = region_arg(o.region, family);
  const auto points = mintype::find_all_critical(family, region, o.tol);
  mintype::SvgOptions svg;
  if (o.resolution > 0) svg.resolution = o.resolution;
  Output out(o.output);
  out.stream() << mintype::levelset_svg(family, region, number_list(o.thresholds), points, svg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Min-type function critical point analysis"};
  app.require_subcommand(1);
  Options o;

  auto add_family = [&](CLI::App* cmd) { cmd->add_option("family", o.family_path, "Family definition file")->required(); };
  auto add_tolerances = [&](CLI::App* cmd) {
    cmd->add_option("--tol-active", o.tol.active_rel, "Relative active-set tolerance");
    cmd->add_option("--tol-feasibility", o.tol.feasibility, "Feasibility / strict positivity threshold");
    cmd->add_option("--tol-rank", o.tol.rank, "Relative singular value cutoff for span rank");
  };
  auto add_region = [&](CLI::App* cmd) {
    cmd->add_option("--region", o.region, "lo,hi or lo0,hi0,lo1,hi1,... (ignored for periodic families)");
  };
  auto add_output = [&](CLI::App* cmd) { cmd->add_option("-o,--output", o.output, "Output file (default stdout)"); };

  auto* validate = app.add_subcommand("validate", "Check a family definition");
  add_family(validate);
  validate->add_option("--emit", o.emit, "Write the normalized family to this file");

  auto* eval = app.add_subcommand("eval", "Evaluate the Min-type function at a point");
  add_family(eval);
  eval->add_option("--point", o.point, "Comma-separated coordinates")->required();

  auto* classify = app.add_subcommand("classify", "Classify a point as regular or critical");
  add_family(classify);
  classify->add_option("--point", o.point, "Comma-separated coordinates")->required();
  classify->add_option("--tol", o.active_tol, "Absolute active-set tolerance (default relative)");
  classify->add_flag("--verify", o.verify, "Cross-check against the sampled lower link");
  classify->add_option("--radius", o.radius, "Probe radius for second-order directions");
  classify->add_option("--samples", o.samples, "Direction samples for --verify");
  add_tolerances(classify);

  auto* find = app.add_subcommand("find-critical", "List all critical points in a region");
  add_family(find);
  add_region(find);
  add_tolerances(find);
  add_output(find);
  find->add_flag("--verify", o.verify, "Check Euler-characteristic jumps against the critical points");
  find->add_option("--resolution", o.resolution, "Grid cells per axis for --verify");

  auto* sweep = app.add_subcommand("euler-sweep", "Euler characteristic of sampled sublevel sets");
  add_family(sweep);
  add_region(sweep);
  add_output(sweep);
  sweep->add_option("--thresholds", o.thresholds, "Comma-separated ascending thresholds");
  sweep->add_option("--from", o.from, "First threshold when --thresholds is absent");
  sweep->add_option("--to", o.to, "Last threshold when --thresholds is absent");
  sweep->add_option("--steps", o.steps, "Number of threshold steps");
  sweep->add_option("--resolution", o.resolution, "Grid cells per axis");

  auto* link = app.add_subcommand("lower-link", "Sampled lower-link profile at a point");
  add_family(link);
  add_output(link);
  add_tolerances(link);
  link->add_option("--point", o.point, "Comma-separated coordinates")->required();
  link->add_option("--radius", o.radius, "Probe radius for second-order directions");
  link->add_option("--samples", o.samples, "Number of sampled directions");

  auto* perturb = app.add_subcommand("perturb", "Track critical points under positive per-piece scaling");
  add_family(perturb);
  add_region(perturb);
  add_tolerances(perturb);
  add_output(perturb);
  perturb->add_option("--scale", o.scale, "Multipliers: '1.1,0.9' or '0:1.1,1:0.9'")->required();

  auto* stability = app.add_subcommand("stability", "Empirical stability radius along a scaling direction");
  add_family(stability);
  add_region(stability);
  add_tolerances(stability);
  stability->add_option("--deviation", o.deviation, "Direction: '1,-1' or '0:1,1:-1'")->required();
  stability->add_option("--eps-max", o.eps_max, "Largest deviation probed");
  stability->add_option("--eps-resolution", o.eps_resolution, "Bisection resolution");

  auto* svg = app.add_subcommand("levelset-svg", "Render level sets and critical points to SVG");
  add_family(svg);
  add_region(svg);
  add_tolerances(svg);
  add_output(svg);
  svg->add_option("--threshold", o.thresholds, "Comma-separated level values")->required();
  svg->add_option("--resolution", o.resolution, "Grid cells per axis");

  CLI11_PARSE(app, argc, argv);

  bool loading = true;
  try {
    if (validate->parsed()) return run_validate(o);
    const Family family = mintype::parse_family_file(o.family_path);
    loading = false;
    if (eval->parsed()) return run_eval(family, o);
    if (classify->parsed()) return run_classify(family, o);
    if (find->parsed()) return run_find_critical(family, o);
    if (sweep->parsed()) return run_euler_sweep(family, o);
    if (link->parsed()) return run_lower_link(family, o);
    if (perturb->parsed()) return run_perturb(family, o);
    if (stability->parsed()) return run_stability(family, o);
    if (svg->parsed()) return run_levelset_svg(family, o);
  } catch (const mintype::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::ParseError) return kExitParse;
    if (loading || mintype::is_validation_error(e.code())) return kExitValidation;
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
