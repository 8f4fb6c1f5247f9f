#include "mintype/family_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mintype {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& source, const std::string& field, const std::string& message) {
  raise(ErrorCode::ParseError, source + ": " + (field.empty() ? "" : "field '" + field + "': ") + message);
}

const json& require(const json& obj, const std::string& key, const std::string& source) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(source, key, "missing");
  return *it;
}

double number(const json& j, const std::string& field, const std::string& source) {
  if (!j.is_number()) parse_fail(source, field, "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

Vector vector_of(const json& j, int dim, const std::string& field, const std::string& source) {
  if (!j.is_array()) parse_fail(source, field, "expected an array");
  if (static_cast<int>(j.size()) != dim) {
    parse_fail(source, field, "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
  }
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = number(j[static_cast<std::size_t>(i)], field + "[" + std::to_string(i) + "]", source);
  return v;
}

Matrix matrix_of(const json& j, int dim, const std::string& field, const std::string& source) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    parse_fail(source, field, "expected " + std::to_string(dim) + " rows");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    m.row(r) = vector_of(j[static_cast<std::size_t>(r)], dim, field + "[" + std::to_string(r) + "]", source).transpose();
  }
  return m;
}

std::vector<Vector> point_list(const json& j, int dim, const std::string& field, const std::string& source) {
  if (!j.is_array()) parse_fail(source, field, "expected an array of points");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_of(j[i], dim, field + "[" + std::to_string(i) + "]", source));
  return out;
}

std::string line_of(const std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
  return "line " + std::to_string(line);
}

}  // namespace

ParsedFamily parse_family_text(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    raise(ErrorCode::ParseError, source + ": " + line_of(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  if (!doc.is_object()) parse_fail(source, "", "top level must be an object");

  const json& kind_field = require(doc, "kind", source);
  if (!kind_field.is_string()) parse_fail(source, "kind", "expected a string");
  const auto kind = kind_field.get<std::string>();
  const json& dim_field = require(doc, "dim", source);
  if (!dim_field.is_number_integer() || dim_field.get<long>() < 1) {
    parse_fail(source, "dim", "expected a positive integer");
  }
  const int dim = dim_field.get<int>();

  ParsedFamily parsed{Family::quadratic(dim, {}), {}};
  if (kind == "quadratic") {
    const json& pieces = require(doc, "pieces", source);
    if (!pieces.is_array()) parse_fail(source, "pieces", "expected an array");
    std::vector<ConvexQuadratic> list;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string prefix = "pieces[" + std::to_string(i) + "]";
      const json& p = pieces[i];
      if (!p.is_object()) parse_fail(source, prefix, "expected an object");
      Matrix a = matrix_of(require(p, "A", source), dim, prefix + ".A", source);
      Vector b = p.contains("b") ? vector_of(p["b"], dim, prefix + ".b", source) : Vector::Zero(dim);
      const double c = p.contains("c") ? number(p["c"], prefix + ".c", source) : 0.0;
      list.emplace_back(std::move(a), std::move(b), c);
    }
    parsed.family = Family::quadratic(dim, std::move(list));
  } else if (kind == "point_sites") {
    parsed.family = Family::point_sites(dim, point_list(require(doc, "sites", source), dim, "sites", source));
  } else if (kind == "periodic") {
    parsed.family = Family::periodic(dim, point_list(require(doc, "base_sites", source), dim, "base_sites", source));
  } else {
    parse_fail(source, "kind", "unknown kind '" + kind + "' (expected quadratic, point_sites or periodic)");
  }

  if (auto it = doc.find("scaling"); it != doc.end()) {
    if (!it->is_object()) parse_fail(source, "scaling", "expected an object of index: multiplier");
    for (const auto& [key, value] : it->items()) {
      std::size_t index = 0;
      std::size_t used = 0;
      try {
        index = std::stoul(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != key.size() || key.empty()) parse_fail(source, "scaling." + key, "key must be a piece index");
      parsed.scaling.entries[index] = number(value, "scaling." + key, source);
    }
  }
  return parsed;
}

Family load_family(std::string_view text, const std::string& source) {
  auto parsed = parse_family_text(text, source);
  require_usable(validate_family(parsed.family));
  if (parsed.scaling.entries.empty()) return parsed.family;
  return apply_scaling(parsed.family, parsed.scaling);
}

Family parse_family_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ParseError, path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_family(buffer.str(), path.string());
}

std::string family_to_json(const Family& family, int indent) {
  json doc;
  doc["kind"] = std::string(to_string(family.kind()));
  doc["dim"] = family.dim();
  auto point = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  if (family.kind() == FamilyKind::Quadratic) {
    json pieces = json::array();
    for (const auto& q : family.base_pieces()) {
      json rows = json::array();
      for (Eigen::Index r = 0; r < q.A.rows(); ++r) rows.push_back(point(q.A.row(r).transpose()));
      pieces.push_back({{"A", rows}, {"b", point(q.b)}, {"c", q.c}});
    }
    doc["pieces"] = pieces;
  } else {
    json sites = json::array();
    for (const auto& s : family.sites()) sites.push_back(point(s));
    doc[family.is_periodic() ? "base_sites" : "sites"] = sites;
    json scaling = json::object();
    for (std::size_t i = 0; i < family.weights().size(); ++i) {
      if (family.weights()[i] != 1.0) scaling[std::to_string(i)] = family.weights()[i];
    }
    if (!scaling.empty()) doc["scaling"] = scaling;
  }
  return doc.dump(indent);
}

void write_family_file(const std::filesystem::path& path, const Family& family) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::InvalidArgument, path.string() + ": cannot write file");
  out << family_to_json(family) << '\n';
}

}  // namespace mintype
