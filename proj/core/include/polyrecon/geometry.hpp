#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace polyrecon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Derived facet quantities. `area` is the (n-1)-dimensional measure (edge
/// length in 2D); `anchor` is the first listed vertex of the facet.
struct Facet {
  Vec normal;
  double area = 0.0;
  Vec anchor;
  std::vector<int> vertices;
};

/// n+1 affinely independent points in R^n.
class Simplex {
public:
  explicit Simplex(std::vector<Vec> vertices);

  int dim() const noexcept { return dim_; }
  const std::vector<Vec>& vertices() const noexcept { return vertices_; }

  /// Matrix whose j-th column is v_j - v_0.
  Mat edge_matrix() const;
  double signed_det() const;
  double volume() const;

private:
  int dim_;
  std::vector<Vec> vertices_;
};

/// Validated convex polytope given by vertices and oriented facet lists.
///
/// Orientation conventions for the facet vertex lists:
///  - n = 2: each facet is an edge [i, j] traversed counterclockwise, so the
///    outward normal is the edge direction rotated clockwise.
///  - n = 3: each facet polygon is listed counterclockwise seen from outside.
///  - n >= 4: facets must be simplicial; the normal is oriented away from the
///    vertex centroid.
/// Construction throws ValidationError when an invariant fails. All
/// tolerances are relative to the vertex-set diameter.
class Polytope {
public:
  Polytope(int dim, std::vector<Vec> vertices,
           std::vector<std::vector<int>> facets);

  static Polytope from_simplex(const Simplex& simplex);

  int dim() const noexcept { return dim_; }
  const std::vector<Vec>& vertices() const noexcept { return vertices_; }
  const std::vector<std::vector<int>>& facets() const noexcept {
    return facets_;
  }
  const std::vector<Facet>& facet_data() const noexcept { return facet_data_; }
  double diameter() const noexcept { return diameter_; }
  Vec vertex_centroid() const;

  Polytope translated(const Vec& offset) const;
  /// Point reflection P -> -P.
  Polytope reflected() const;
  Polytope scaled(double factor) const;

private:
  void compute_facets();
  void validate_topology() const;
  void validate_convexity() const;

  int dim_;
  std::vector<Vec> vertices_;
  std::vector<std::vector<int>> facets_;
  std::vector<Facet> facet_data_;
  double diameter_ = 0.0;
};

/// Relative tolerance applied to the diameter for all geometric checks.
inline constexpr double kGeometryTolerance = 1e-9;

const std::vector<Facet>& facet_data(const Polytope& polytope);
double volume(const Polytope& polytope);
std::vector<Simplex> triangulate(const Polytope& polytope);
bool is_facet_generic(const Polytope& polytope);

/// Volume-weighted centroid.
Vec centroid(const Polytope& polytope);

/// Vector orthogonal to the n-1 columns of `edges` (n x (n-1)) whose norm
/// equals (n-1)! times the volume of the simplex they span.
Vec generalized_cross(const Mat& edges);

double factorial(int n);

}  // namespace polyrecon
