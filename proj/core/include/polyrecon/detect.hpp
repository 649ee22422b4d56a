#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polyrecon/geometry.hpp"
#include "polyrecon/scan.hpp"

namespace polyrecon {

enum class DetectionMethod { smooth, cluster };

std::string to_string(DetectionMethod method);
DetectionMethod parse_detection_method(std::string_view text);

struct DetectionConfig {
  DetectionMethod method = DetectionMethod::smooth;
  /// Minimum raw psi of a reported peak; should sit below the smallest
  /// expected facet area.
  double theta = 0.05;
  int window = 5;               // box filter width, odd
  double cluster_radius = 3.0;  // grid cells

  void validate() const;
};

struct FacetIndicator {
  Vec normal;  // unit, sign unknown
  double area = 0.0;
};

/// Unit normals (up to sign) paired with facet areas.
struct FacetIndicatorSet {
  int dim = 0;
  std::vector<FacetIndicator> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  /// Throws ValidationError unless every normal is unit, every area positive
  /// and no two normals are parallel within 1e-6.
  void validate() const;
};

/// Exact indicator set of a known polytope (outward normals).
FacetIndicatorSet indicator_set(const Polytope& polytope);

/// Box-filters psi along each parameter axis, then reports each strict local
/// maximum of the filtered field whose raw psi exceeds theta. The area is the
/// raw psi at that sample.
FacetIndicatorSet detect_smooth(const Pattern& pattern, const DetectionConfig& cfg);

/// Single-linkage clustering of the raw strict local maxima above theta; each
/// cluster reports its largest sample. Exactly antipodal samples are never
/// linked.
FacetIndicatorSet detect_cluster(const Pattern& pattern, const DetectionConfig& cfg);

FacetIndicatorSet detect(const Pattern& pattern, const DetectionConfig& cfg);

/// Indices of the strict local maxima of `field` over the pattern's grid,
/// using wrap-aware neighbourhoods. Samples are ordered by value, then by
/// lower flat index, so equal neighbours never hide a peak.
std::vector<std::size_t> strict_local_maxima(const Pattern& pattern,
                                             const std::vector<double>& field);

/// Axis-separable moving average with the given odd window.
std::vector<double> box_filter(const Pattern& pattern, const std::vector<double>& field,
                               int window);

}  // namespace polyrecon
