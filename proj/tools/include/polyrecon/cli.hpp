#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polyrecon/detect.hpp"
#include "polyrecon/geometry.hpp"

namespace polyrecon::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kEmptyDetection = 3,
  kInfeasible = 4,
  kIo = 5,
};

/// Runs the polyrecon command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Solution {
  Polytope polytope;
  double residual = 0.0;  // relative area mismatch of the result
  double closure = 0.0;   // relative closure residual of the signed input
};

/// Dispatches on dimension and entry count: n+1 entries go to the simplex
/// construction, otherwise signs are resolved at `tol` and every surviving
/// assignment is reconstructed (polygon chaining in 2D, support fit in 3D).
std::vector<Solution> reconstruct_any(const FacetIndicatorSet& set, double tol);

/// Smallest vertex-set Hausdorff distance between `a` and `b` over the two
/// point reflections of `b`, after matching vertex centroids.
double aligned_vertex_error(const Polytope& a, const Polytope& b);

struct FacetMatch {
  double area = 0.0;       // true facet area
  double found = 0.0;      // matched area, 0 when nothing matched
  double angle = 0.0;      // radians between unsigned normals
};

/// Matches every facet of `truth` to the entry with the most parallel
/// unsigned normal.
std::vector<FacetMatch> match_facets(const Polytope& truth, const FacetIndicatorSet& found);

}  // namespace polyrecon::cli
