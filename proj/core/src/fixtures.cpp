#include "polyrecon/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "polyrecon/errors.hpp"
#include "polyrecon/reconstruct.hpp"

namespace polyrecon::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double x, double y) { return Eigen::Vector2d(x, y); }
Vec v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

Polytope polygon(const std::vector<Vec>& vertices) {
  std::vector<std::vector<int>> facets;
  const int f = static_cast<int>(vertices.size());
  for (int k = 0; k < f; ++k) facets.push_back({k, (k + 1) % f});
  return Polytope(2, vertices, facets);
}

// Octahedron with vertices v[0], v[1] opposite along x, v[2], v[3] along y and
// v[4], v[5] along z.
Polytope octahedron(std::vector<Vec> v) {
  std::vector<std::vector<int>> facets;
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (int sz : {1, -1}) {
        const int x = sx > 0 ? 0 : 1, y = sy > 0 ? 2 : 3, z = sz > 0 ? 4 : 5;
        if (sx * sy * sz > 0) facets.push_back({x, y, z});
        else facets.push_back({x, z, y});
      }
  return Polytope(3, std::move(v), std::move(facets));
}

Polytope hexagon_from_egi(const std::vector<Vec>& m) {
  return reconstruct_polygon_2d(EGI{m}, 1e-9);
}

std::vector<Vec> triangle_egi(double start_deg, double length) {
  std::vector<Vec> out;
  for (int k = 0; k < 3; ++k) {
    const double a = (start_deg + 120.0 * k) * kPi / 180.0;
    out.push_back(v2(length * std::cos(a), length * std::sin(a)));
  }
  return out;
}

}  // namespace

Polytope unit_triangle() { return polygon({v2(0, 0), v2(1, 0), v2(0, 1)}); }

Polytope unit_square() { return polygon({v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)}); }

Polytope unit_cube() {
  std::vector<Vec> v;
  for (int k = 0; k < 8; ++k) v.push_back(v3(k & 1, (k >> 1) & 1, (k >> 2) & 1));
  return Polytope(3, v,
                  {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}});
}

Polytope regular_tetrahedron(double edge) {
  const double s = edge / (2.0 * std::sqrt(2.0));
  return Polytope::from_simplex(
      Simplex({v3(s, s, s), v3(s, -s, -s), v3(-s, s, -s), v3(-s, -s, s)}));
}

Polytope hexagon() {
  return polygon({v2(0.8629, 0.2772), v2(0.2681, 1.0205), v2(-0.5871, 0.4889),
                  v2(-1.1290, -0.3606), v2(-0.1688, -0.7577), v2(0.7539, -0.6683)});
}

Polytope perturbed_octahedron() {
  return octahedron({v3(1, 0.1, 0), v3(-1, 0, 0), v3(0, 1, 0), v3(0, -1, 0), v3(0, 0, 1),
                     v3(0, 0, -1)});
}

Polytope deformed_octahedron() {
  return octahedron({v3(0.49, 0.19, 0.25), v3(-1.0, 0.29, -0.01), v3(-0.1, 0.9, -0.24),
                     v3(0.05, -0.65, -0.16), v3(-0.01, -0.17, 0.85), v3(-0.18, -0.25, -0.85)});
}

std::pair<Polytope, Polytope> ambiguous_hexagons() {
  auto t = triangle_egi(90.0, 0.5);
  auto u = triangle_egi(10.0, 0.35);
  std::vector<Vec> plus = t, minus = t;
  for (const auto& m : u) {
    plus.push_back(m);
    minus.push_back(-m);
  }
  return {hexagon_from_egi(plus), hexagon_from_egi(minus)};
}

Simplex random_simplex(int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("simplex dimension must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.5);
  for (;;) {
    std::vector<Vec> v;
    for (int k = 0; k <= n; ++k) {
      Vec p(n);
      for (int i = 0; i < n; ++i) p(i) = gauss(rng);
      v.push_back(p);
    }
    Mat e(n, n);
    for (int k = 1; k <= n; ++k) e.col(k - 1) = v[k] - v[0];
    if (std::abs(e.determinant()) < 1e-3) continue;
    const Simplex s(v);
    const Polytope p = Polytope::from_simplex(s);
    double min_height = INFINITY;
    for (const auto& f : p.facet_data()) min_height = std::min(min_height, n * s.volume() / f.area);
    if (min_height >= 0.15 * p.diameter()) return s;
  }
}

Polytope random_polygon(int f, std::uint64_t seed) {
  if (f < 3) throw ValidationError("polygon needs at least 3 vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    std::vector<double> angle;
    for (int k = 0; k < f; ++k) angle.push_back(2 * kPi * unit(rng));
    std::sort(angle.begin(), angle.end());
    double min_gap = 2 * kPi - (angle.back() - angle.front());
    for (int k = 1; k < f; ++k) min_gap = std::min(min_gap, angle[k] - angle[k - 1]);
    if (min_gap < 0.4 * 2 * kPi / f) continue;
    std::vector<Vec> v;
    for (double a : angle) v.push_back(v2(0.5 * std::cos(a), 0.5 * std::sin(a)));
    Polytope p = polygon(v);
    if (is_facet_generic(p)) return p;
  }
}

Polytope random_polytope_3d(int f, std::uint64_t seed) {
  if (f < 4) throw ValidationError("3D polytope needs at least 4 facets");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    HalfspaceSystem sys{3, {}};
    for (int k = 0; k < f; ++k) {
      const Vec n = v3(gauss(rng), gauss(rng), gauss(rng)).normalized();
      sys.rows.push_back({n, Relation::less_equal, 0.5 * (1.0 + 0.2 * unit(rng))});
    }
    try {
      Polytope p = halfspaces_to_vertices(sys);
      if (static_cast<int>(p.facets().size()) == f && is_facet_generic(p)) return p;
    } catch (const std::exception&) {
    }
  }
}

std::vector<std::string> names() {
  return {"triangle",           "square",
          "cube",               "tetrahedron",
          "hexagon",            "perturbed-octahedron",
          "deformed-octahedron", "ambiguous-hexagon",
          "random-simplex-N",   "random-polygon",
          "random-polytope"};
}

Polytope by_name(const std::string& name, std::uint64_t seed) {
  if (name == "triangle") return unit_triangle();
  if (name == "square") return unit_square();
  if (name == "cube") return unit_cube();
  if (name == "tetrahedron") return regular_tetrahedron();
  if (name == "hexagon") return hexagon();
  if (name == "perturbed-octahedron") return perturbed_octahedron();
  if (name == "deformed-octahedron") return deformed_octahedron();
  if (name == "ambiguous-hexagon") return ambiguous_hexagons().first;
  if (name == "random-polygon") return random_polygon(6, seed);
  if (name == "random-polytope") return random_polytope_3d(8, seed);
  if (name.rfind("random-simplex-", 0) == 0) {
    const int n = std::stoi(name.substr(15));
    return Polytope::from_simplex(random_simplex(n, seed));
  }
  throw ValidationError("unknown fixture '" + name + "'");
}

}  // namespace polyrecon::fixtures
