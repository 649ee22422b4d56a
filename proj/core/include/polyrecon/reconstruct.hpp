#pragma once

#include <cstddef>
#include <vector>

#include "polyrecon/detect.hpp"
#include "polyrecon/geometry.hpp"

namespace polyrecon {

/// Area-weighted outward normals m_j = A_j n_j.
struct EGI {
  std::vector<Vec> vectors;

  int dim() const;
  /// |sum m_j|
  double closure_residual() const;
  /// sum |m_j|
  double total() const;
  /// Throws ValidationError unless |sum m_j| <= tol * sum |m_j| and the
  /// vectors span R^n.
  void validate(double tol = 1e-6) const;
};

EGI egi_of(const Polytope& polytope);

enum class Relation { less_equal, greater_equal };

struct Halfspace {
  Vec normal;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

struct HalfspaceSystem {
  int dim = 0;
  std::vector<Halfspace> rows;
};

/// Vertices of the feasible region by n-subset intersection, then facet
/// incidence from the rows each vertex satisfies with equality. Redundant
/// rows are dropped. Throws ReconstructionError for empty, lower-dimensional
/// or unbounded regions.
Polytope halfspaces_to_vertices(const HalfspaceSystem& system);

struct SignAssignment {
  std::vector<int> signs;  // +1 / -1, signs[0] == +1
  double residual = 0.0;   // |sum eps_j A_j n_j| / sum A_j
};

EGI egi_of(const FacetIndicatorSet& set, const SignAssignment& signs);

/// Every sign vector with eps_0 = +1 whose EGI closes to tol (relative to
/// sum A_j), best residual first. Throws ValidationError when f > 30 or the
/// normals do not span R^n, ReconstructionError (carrying the best relative
/// residual) when nothing survives.
std::vector<SignAssignment> resolve_signs(const FacetIndicatorSet& set, double tol);

struct SimplexReconstruction {
  Simplex simplex;
  HalfspaceSystem system;
  double a = 0.0;              // offset of the facet of largest area
  double area_residual = 0.0;  // max_j |A_j(result) - A_j| / A_j
};

/// Simplex with the given n+1 unsigned facet normals and areas, unique up to
/// translation and point reflection. The largest-area facet is placed on
/// n_0 . x = a and the opposite vertex at the origin.
SimplexReconstruction reconstruct_simplex(const FacetIndicatorSet& set);

/// Chains the EGI vectors by angle and rotates by +pi/2. The closure error
/// is spread evenly over the vertices.
Polytope reconstruct_polygon_2d(const EGI& egi, double closure_tol = 1e-6);

struct FitOptions {
  double closure_tol = 1e-6;
  double tol = 1e-12;  // stop when sqrt(objective) <= tol * sum A_j
  std::size_t max_evaluations = 200'000;
};

struct FitResult {
  Polytope polytope;
  std::vector<double> support;  // h_j, before recentring
  double residual = 0.0;        // max_j |area_j - A_j| / A_j
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Fits support parameters h so the facet areas of {x : n_j . x <= h_j}
/// match the EGI, by coordinate descent with step halving starting from
/// h_j = 1 (rescaled to the total area). The result is centred at its
/// volume centroid.
FitResult reconstruct_polytope_3d(const EGI& egi, const FitOptions& options = {});

}  // namespace polyrecon
