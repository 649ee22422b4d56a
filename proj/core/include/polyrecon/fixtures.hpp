#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polyrecon/geometry.hpp"

namespace polyrecon::fixtures {

Polytope unit_triangle();
Polytope unit_square();
Polytope unit_cube();
/// Regular tetrahedron with the given edge length, centred at the origin.
Polytope regular_tetrahedron(double edge = 1.0);
/// Facet-generic hexagon with edge lengths between 0.92 and 1.04; unsigned
/// normals are at least 25 degrees apart.
Polytope hexagon();
/// Octahedron conv(+-e_i) with vertex e_1 moved to (1, 0.1, 0).
Polytope perturbed_octahedron();
/// Octahedron with all six vertices displaced. Facet normals are at least
/// 0.5 rad from parallel and every wrong sign assignment leaves a closure
/// residual above 0.1 of the total area.
Polytope deformed_octahedron();
/// Two facet-generic hexagons with the same unsigned normals and edge
/// lengths: the Minkowski sums T + U and T - U of two triangles.
std::pair<Polytope, Polytope> ambiguous_hexagons();

/// Well-conditioned random simplex in R^n.
Simplex random_simplex(int n, std::uint64_t seed);
/// Facet-generic convex polygon with f vertices on a circle of radius ~0.5.
Polytope random_polygon(int f, std::uint64_t seed);
/// Facet-generic 3D polytope cut out by f random halfspaces tangent to a
/// sphere of radius ~0.5; every halfspace contributes a facet.
Polytope random_polytope_3d(int f, std::uint64_t seed);

/// Names accepted by `by_name`.
std::vector<std::string> names();
/// Named fixture; "random-simplex", "random-polygon" and "random-polytope"
/// use the seed.
Polytope by_name(const std::string& name, std::uint64_t seed = 1);

}  // namespace polyrecon::fixtures
