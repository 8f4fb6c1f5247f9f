#include "mintype/classifier.hpp"
#include "mintype/critical_finder.hpp"
#include "mintype/deformation.hpp"
#include "mintype/family_io.hpp"
#include "mintype/levelset_svg.hpp"
#include "mintype/verifier_oracle.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace mintype;

namespace {

Box region_or_default(const Family& family, const std::optional<Box>& region) {
  return region ? *region : default_region(family);
}

// Accepts either a sequence of multipliers or a {index: multiplier} mapping.
std::map<std::size_t, double> index_map(const py::object& obj) {
  std::map<std::size_t, double> out;
  if (py::isinstance<py::dict>(obj)) {
    for (auto item : obj.cast<py::dict>()) out[item.first.cast<std::size_t>()] = item.second.cast<double>();
  } else {
    std::size_t i = 0;
    for (auto v : obj) out[i++] = v.cast<double>();
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_mintype, m) {
  m.doc() = "Critical points of pointwise minima of convex quadratics";

  auto error_type = py::exception<Error>(m, "MintypeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object cls = py::module_::import("mintype._mintype").attr("MintypeError");
      py::object err = cls(e.what());
      err.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(cls.ptr(), err.ptr());
    }
  });
  (void)error_type;

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def(py::init([](double active_rel, double feasibility, double rank, double zero_gradient, double dedup) {
             return Tolerances{active_rel, feasibility, rank, zero_gradient, dedup};
           }),
           py::arg("active_rel") = 1e-8, py::arg("feasibility") = 1e-9, py::arg("rank") = 1e-10,
           py::arg("zero_gradient") = 1e-9, py::arg("dedup") = 1e-7)
      .def_readwrite("active_rel", &Tolerances::active_rel)
      .def_readwrite("feasibility", &Tolerances::feasibility)
      .def_readwrite("rank", &Tolerances::rank)
      .def_readwrite("zero_gradient", &Tolerances::zero_gradient)
      .def_readwrite("dedup", &Tolerances::dedup);

  py::class_<Box>(m, "Box")
      .def(py::init([](const Vector& lo, const Vector& hi) {
             Box b{lo, hi};
             b.check();
             return b;
           }),
           py::arg("lo"), py::arg("hi"))
      .def_static("cube", &Box::cube, py::arg("dim"), py::arg("lo"), py::arg("hi"))
      .def_static("unit_cell", &Box::unit_cell, py::arg("dim"))
      .def_readonly("lo", &Box::lo)
      .def_readonly("hi", &Box::hi)
      .def("contains", &Box::contains, py::arg("x"), py::arg("slack") = 0.0)
      .def("__repr__", [](const Box& b) {
        return "Box(lo=" + format_vector(b.lo) + ", hi=" + format_vector(b.hi) + ")";
      });

  py::class_<ConvexQuadratic>(m, "ConvexQuadratic")
      .def(py::init<Matrix, Vector, double>(), py::arg("A"), py::arg("b"), py::arg("c") = 0.0)
      .def_static("squared_distance", &ConvexQuadratic::squared_distance, py::arg("site"), py::arg("weight") = 1.0)
      .def_readonly("A", &ConvexQuadratic::A)
      .def_readonly("b", &ConvexQuadratic::b)
      .def_readonly("c", &ConvexQuadratic::c)
      .def_readonly("weight", &ConvexQuadratic::weight)
      .def("value", &ConvexQuadratic::value)
      .def("gradient", &ConvexQuadratic::gradient)
      .def("minimizer", &ConvexQuadratic::minimizer);

  py::class_<PieceId>(m, "PieceId")
      .def_readonly("base", &PieceId::base)
      .def_readonly("shift", &PieceId::shift)
      .def("__eq__", [](const PieceId& a, const PieceId& b) { return a == b; })
      .def("__hash__", [](const PieceId& p) { return py::hash(py::make_tuple(p.base, py::tuple(py::cast(p.shift)))); })
      .def("__repr__", [](const PieceId& p) { return "PieceId(" + format_piece(p) + ")"; });

  py::class_<Family>(m, "Family")
      .def_static("quadratic", py::overload_cast<std::vector<ConvexQuadratic>>(&Family::quadratic), py::arg("pieces"))
      .def_static("point_sites", py::overload_cast<std::vector<Vector>>(&Family::point_sites), py::arg("sites"))
      .def_static("periodic", py::overload_cast<std::vector<Vector>>(&Family::periodic), py::arg("base_sites"))
      .def_property_readonly("kind", [](const Family& f) { return std::string(to_string(f.kind())); })
      .def_property_readonly("dim", &Family::dim)
      .def_property_readonly("base_count", &Family::base_count)
      .def_property_readonly("pieces", &Family::base_pieces)
      .def_property_readonly("sites", &Family::sites)
      .def_property_readonly("weights", &Family::weights)
      .def("wrap", &Family::wrap)
      .def("distance", &Family::distance)
      .def("__len__", &Family::base_count)
      .def("__repr__", [](const Family& f) {
        return "Family(kind=" + std::string(to_string(f.kind())) + ", dim=" + std::to_string(f.dim()) +
               ", pieces=" + std::to_string(f.base_count()) + ")";
      });

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_property_readonly("usable", &ValidationReport::usable)
      .def_readonly("locality_ok", &ValidationReport::locality_ok)
      .def_readonly("detail", &ValidationReport::detail)
      .def_property_readonly("failure", [](const ValidationReport& r) -> std::optional<std::string> {
        if (!r.failure) return std::nullopt;
        return std::string(to_string(*r.failure));
      });

  m.def("validate_family", &validate_family, py::arg("family"));
  m.def("default_region", &default_region, py::arg("family"), py::arg("padding") = 1.0);
  m.def(
      "apply_scaling", [](const Family& f, const py::object& scale) { return apply_scaling(f, ScalingVector{index_map(scale)}); },
      py::arg("family"), py::arg("scale"));
  m.def(
      "load_family", [](const std::string& text) { return load_family(text); }, py::arg("text"),
      "Parse, validate and apply scaling to a JSON family definition.");
  m.def("read_family", &parse_family_file, py::arg("path"));
  m.def("write_family", &write_family_file, py::arg("path"), py::arg("family"));
  m.def("family_to_json", &family_to_json, py::arg("family"), py::arg("indent") = 2);

  py::class_<ActiveMember>(m, "ActiveMember")
      .def_readonly("id", &ActiveMember::id)
      .def_readonly("value", &ActiveMember::value)
      .def_readonly("gradient", &ActiveMember::gradient);

  py::class_<ActiveSet>(m, "ActiveSet")
      .def_readonly("point", &ActiveSet::point)
      .def_readonly("value", &ActiveSet::value)
      .def_readonly("members", &ActiveSet::members)
      .def_readonly("tolerance_used", &ActiveSet::tolerance_used)
      .def("gradients", &ActiveSet::gradients)
      .def("__len__", &ActiveSet::size);

  m.def("evaluate_min", &evaluate_min, py::arg("family"), py::arg("x"));
  m.def("active_set", &active_set, py::arg("family"), py::arg("x"), py::arg("tol") = std::nullopt,
        py::arg("tolerances") = Tolerances{});
  m.def("directional_derivative", py::overload_cast<const std::vector<Vector>&, const Vector&>(&directional_derivative),
        py::arg("gradients"), py::arg("v"));

  py::class_<Classification>(m, "Classification")
      .def_property_readonly("verdict", [](const Classification& c) { return std::string(to_string(c.verdict)); })
      .def_readonly("index", &Classification::index)
      .def_readonly("span_rank", &Classification::span_rank)
      .def_readonly("lambda_", &Classification::lambda)
      .def_readonly("direction", &Classification::direction)
      .def_readonly("margin", &Classification::margin)
      .def_readonly("active", &Classification::active)
      .def_property_readonly("is_critical", &Classification::is_critical)
      .def("__repr__", [](const Classification& c) {
        std::string out = "Classification(" + std::string(to_string(c.verdict));
        if (c.is_critical()) out += ", index=" + std::to_string(c.index);
        return out + ")";
      });

  m.def("classify_point", &classify_point, py::arg("family"), py::arg("x"), py::arg("active_tol") = std::nullopt,
        py::arg("tolerances") = Tolerances{});
  m.def(
      "classify_gradients",
      [](const std::vector<Vector>& gradients, const Tolerances& tol) {
        if (gradients.empty()) raise(ErrorCode::EmptyGradientList, "no gradients");
        ActiveSet aset;
        aset.point = Vector::Zero(gradients.front().size());
        for (std::size_t i = 0; i < gradients.size(); ++i) aset.members.push_back({PieceId{i, {}}, 0.0, gradients[i]});
        return classify_active_set(aset, tol);
      },
      py::arg("gradients"), py::arg("tolerances") = Tolerances{},
      "Classify an abstract configuration of active gradients.");
  m.def(
      "has_increase_direction",
      [](const std::vector<Vector>& g, const Tolerances& tol) -> std::optional<Vector> {
        return has_increase_direction(g, tol).direction;
      },
      py::arg("gradients"), py::arg("tolerances") = Tolerances{});
  m.def("span_rank", &span_rank, py::arg("gradients"), py::arg("tolerances") = Tolerances{});

  py::class_<CriticalPoint>(m, "CriticalPoint")
      .def_readonly("location", &CriticalPoint::location)
      .def_readonly("value", &CriticalPoint::value)
      .def_readonly("index", &CriticalPoint::index)
      .def_readonly("certificate", &CriticalPoint::certificate)
      .def("__repr__", [](const CriticalPoint& p) {
        std::ostringstream out;
        out << "CriticalPoint(location=" << format_vector(p.location) << ", value=" << p.value << ", index=" << p.index
            << ")";
        return out.str();
      });

  m.def(
      "find_all_critical",
      [](const Family& f, const std::optional<Box>& region, const Tolerances& tol) {
        return find_all_critical(f, region_or_default(f, region), tol);
      },
      py::arg("family"), py::arg("region") = std::nullopt, py::arg("tolerances") = Tolerances{});

  m.def(
      "euler_sweep",
      [](const Family& f, const std::vector<double>& thresholds, const std::optional<Box>& region, int resolution) {
        auto grid = GridSpec::for_family(f, region_or_default(f, region));
        if (resolution > 0) grid.resolution = resolution;
        std::vector<std::pair<double, long>> out;
        for (const auto& p : euler_sweep(f, grid, thresholds)) out.emplace_back(p.t, p.chi);
        return out;
      },
      py::arg("family"), py::arg("thresholds"), py::arg("region") = std::nullopt, py::arg("resolution") = 0);

  m.def(
      "sweep_consistent",
      [](const Family& f, const std::vector<CriticalPoint>& points, const std::optional<Box>& region, int resolution) {
        auto grid = GridSpec::for_family(f, region_or_default(f, region));
        if (resolution > 0) grid.resolution = resolution;
        return sweep_morse_consistency(f, points, grid).consistent();
      },
      py::arg("family"), py::arg("points"), py::arg("region") = std::nullopt, py::arg("resolution") = 0,
      "True when every Euler-sweep jump matches the signed count of critical points at that value.");

  py::class_<LowerLinkProfile>(m, "LowerLinkProfile")
      .def_readonly("point", &LowerLinkProfile::point)
      .def_readonly("components", &LowerLinkProfile::components)
      .def_readonly("euler", &LowerLinkProfile::euler)
      .def_readonly("samples", &LowerLinkProfile::samples);

  m.def("lower_link_profile", &lower_link_profile, py::arg("family"), py::arg("x"), py::arg("radius") = 1e-3,
        py::arg("samples") = 0, py::arg("tolerances") = Tolerances{});

  py::class_<TrackMatch>(m, "TrackMatch")
      .def_readonly("base", &TrackMatch::base)
      .def_readonly("deformed", &TrackMatch::deformed)
      .def_readonly("displacement", &TrackMatch::displacement);

  py::class_<TrackedFamily>(m, "TrackedFamily")
      .def_readonly("matches", &TrackedFamily::matches)
      .def_readonly("unmatched_new", &TrackedFamily::unmatched_new)
      .def_property_readonly("all_matched", &TrackedFamily::all_matched)
      .def_property_readonly("structure_preserved", &TrackedFamily::structure_preserved);

  m.def(
      "perturb_and_track",
      [](const Family& f, const py::object& scale, const std::optional<Box>& region, const Tolerances& tol) {
        return perturb_and_track(f, ScalingVector{index_map(scale)}, region_or_default(f, region), tol);
      },
      py::arg("family"), py::arg("scale"), py::arg("region") = std::nullopt, py::arg("tolerances") = Tolerances{});

  m.def(
      "stability_radius",
      [](const Family& f, const py::object& deviation, const std::optional<Box>& region, double eps_max,
         double resolution) {
        return stability_radius(f, ScalingDeviation{index_map(deviation)}, region_or_default(f, region), eps_max,
                                resolution);
      },
      py::arg("family"), py::arg("deviation"), py::arg("region") = std::nullopt, py::arg("eps_max") = kDefaultEpsMax,
      py::arg("resolution") = 1e-3);

  m.def(
      "levelset_svg",
      [](const Family& f, const std::vector<double>& thresholds, const std::optional<Box>& region) {
        const Box box = region_or_default(f, region);
        return levelset_svg(f, box, thresholds, find_all_critical(f, box));
      },
      py::arg("family"), py::arg("thresholds"), py::arg("region") = std::nullopt);
}
