#pragma once

#include <filesystem>
#include <string>

#include "polyrecon/detect.hpp"
#include "polyrecon/geometry.hpp"
#include "polyrecon/scan.hpp"

namespace polyrecon {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// {"dim": n, "vertices": [[..], ..], "facets": [[i, ..], ..]}
std::string polytope_to_json(const Polytope& polytope);
Polytope polytope_from_json(const std::string& text);

// {"dim": n, "entries": [{"normal": [..], "area": a}, ..]}
std::string indicator_set_to_json(const FacetIndicatorSet& set);
FacetIndicatorSet indicator_set_from_json(const std::string& text);

/// CSV with header t1[,t2],abs_phi,psi, one row per grid sample in row-major
/// order.
std::string pattern_csv(const Pattern& pattern);
/// Wavelength, surface and grid of a pattern as JSON.
std::string pattern_sidecar(const Pattern& pattern);
Pattern pattern_from_text(const std::string& csv, const std::string& sidecar);

/// Sidecar of `csv_path` is the same path with extension ".json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

Polytope read_polytope(const std::filesystem::path& path);
void write_polytope(const std::filesystem::path& path, const Polytope& polytope);
FacetIndicatorSet read_indicator_set(const std::filesystem::path& path);
void write_indicator_set(const std::filesystem::path& path, const FacetIndicatorSet& set);
Pattern read_pattern(const std::filesystem::path& csv_path);
void write_pattern(const std::filesystem::path& csv_path, const Pattern& pattern);

/// Wavefront OBJ of a 3D polytope.
std::string polytope_obj(const Polytope& polytope);
/// SVG drawing of a polygon.
std::string polygon_svg(const Polytope& polygon);
/// SVG polyline of psi against t for a semicircle pattern.
std::string psi_curve_svg(const Pattern& pattern);

}  // namespace polyrecon
