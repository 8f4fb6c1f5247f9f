#pragma once

#include "mintype/convex_family.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mintype {

// Family-definition files are JSON objects:
//
//   { "kind": "quadratic",   "dim": n, "pieces": [ {"A": [[...]], "b": [...], "c": r}, ... ] }
//   { "kind": "point_sites", "dim": n, "sites": [ [...], ... ] }
//   { "kind": "periodic",    "dim": n, "base_sites": [ [...], ... ] }
//
// with an optional top-level "scaling": { "<piece index>": multiplier, ... }.

// Builds the family described by the text without validating it. The
// scaling map, if any, is returned separately. Throws ParseError.
struct ParsedFamily {
  Family family;
  ScalingVector scaling;
};
ParsedFamily parse_family_text(std::string_view text, const std::string& source = "<input>");

// Parses, validates (throwing the first validation failure) and applies the
// optional scaling.
Family load_family(std::string_view text, const std::string& source = "<input>");
Family parse_family_file(const std::filesystem::path& path);

// Serializes a family so that parse_family_file reproduces its piece values
// bit for bit. Site families carry their weights as a scaling map.
std::string family_to_json(const Family& family, int indent = 2);
void write_family_file(const std::filesystem::path& path, const Family& family);

}  // namespace mintype
