#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polyrecon/errors.hpp"
#include "polyrecon/fixtures.hpp"
#include "polyrecon/geometry.hpp"

using namespace polyrecon;
namespace fx = polyrecon::fixtures;

namespace {

Vec v2(double x, double y) { return Eigen::Vector2d(x, y); }
Vec v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

std::vector<Polytope> corpus() {
  return {fx::unit_triangle(),       fx::unit_square(),          fx::unit_cube(),
          fx::regular_tetrahedron(), fx::hexagon(),              fx::perturbed_octahedron(),
          fx::deformed_octahedron(), fx::ambiguous_hexagons().first,
          fx::ambiguous_hexagons().second, fx::random_polygon(7, 3), fx::random_polytope_3d(9, 4)};
}

const Facet* facet_with_normal(const Polytope& p, const Vec& n) {
  for (const auto& f : p.facet_data())
    if ((f.normal - n).norm() < 1e-12) return &f;
  return nullptr;
}

}  // namespace

TEST_CASE("unit triangle facets") {
  const Polytope t = fx::unit_triangle();
  REQUIRE(t.facet_data().size() == 3);
  const Facet* bottom = facet_with_normal(t, v2(0, -1));
  const Facet* left = facet_with_normal(t, v2(-1, 0));
  const Facet* hyp = facet_with_normal(t, v2(1, 1) / std::sqrt(2.0));
  REQUIRE(bottom);
  REQUIRE(left);
  REQUIRE(hyp);
  CHECK(bottom->area == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(left->area == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hyp->area == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("regular tetrahedron facets have area sqrt(3)/4") {
  for (const auto& f : fx::regular_tetrahedron(1.0).facet_data())
    CHECK(f.area == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-14));
}

TEST_CASE("facet data agrees with an independent area computation") {
  for (const auto& p : corpus()) {
    const auto areas = oracle::facet_areas(p);
    for (std::size_t k = 0; k < areas.size(); ++k)
      CHECK(p.facet_data()[k].area == doctest::Approx(areas[k]).epsilon(1e-12));
  }
}

TEST_CASE("facet anchors and normals satisfy the plane equation") {
  for (const auto& p : corpus())
    for (const auto& f : p.facet_data()) {
      CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
      for (int i : f.vertices)
        CHECK(std::abs(f.normal.dot(p.vertices()[i] - f.anchor)) <= 1e-9 * p.diameter());
      // outward: every vertex on the inner side
      for (const auto& v : p.vertices()) CHECK(f.normal.dot(v - f.anchor) <= 1e-9 * p.diameter());
    }
}

TEST_CASE("Minkowski closure holds on the fixture corpus") {
  for (const auto& p : corpus()) {
    Vec sum = Vec::Zero(p.dim());
    double total = 0.0;
    for (const auto& f : p.facet_data()) {
      sum += f.area * f.normal;
      total += f.area;
    }
    CHECK(sum.norm() <= 1e-9 * total);
  }
}

TEST_CASE("volume") {
  CHECK(volume(fx::unit_triangle()) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(volume(fx::unit_cube()) == doctest::Approx(1.0).epsilon(1e-15));
  for (int n : {2, 3, 4}) {
    const Simplex s = fx::random_simplex(n, 11);
    CHECK(volume(Polytope::from_simplex(s)) ==
          doctest::Approx(std::abs(s.edge_matrix().determinant()) / factorial(n)).epsilon(1e-12));
  }
  for (const auto& p : corpus()) CHECK(volume(p) == doctest::Approx(oracle::divergence_volume(p)).epsilon(1e-12));
}

TEST_CASE("triangulation") {
  SUBCASE("a simplex triangulates to itself") {
    const Simplex s = fx::random_simplex(3, 2);
    const auto cells = triangulate(Polytope::from_simplex(s));
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].volume() == doctest::Approx(s.volume()).epsilon(1e-14));
  }
  SUBCASE("unit square gives two triangles") {
    const auto cells = triangulate(fx::unit_square());
    CHECK(cells.size() == 2);
    double area = 0.0;
    for (const auto& c : cells) area += c.volume();
    CHECK(area == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("volumes add up") {
    for (const auto& p : corpus()) {
      double sum = 0.0;
      for (const auto& c : triangulate(p)) sum += c.volume();
      CHECK(sum == doctest::Approx(volume(p)).epsilon(1e-9));
    }
  }
}

TEST_CASE("facet genericity") {
  CHECK_FALSE(is_facet_generic(fx::unit_cube()));
  CHECK_FALSE(is_facet_generic(fx::unit_square()));
  CHECK(is_facet_generic(fx::unit_triangle()));
  CHECK(is_facet_generic(fx::perturbed_octahedron()));
  CHECK(is_facet_generic(fx::deformed_octahedron()));
  CHECK(is_facet_generic(fx::hexagon()));

  // pairwise check as an oracle
  for (const auto& p : corpus()) {
    bool generic = true;
    const auto& fd = p.facet_data();
    for (std::size_t i = 0; i < fd.size(); ++i)
      for (std::size_t j = i + 1; j < fd.size(); ++j)
        if (std::abs(fd[i].normal.dot(fd[j].normal)) > 1.0 - 1e-9) generic = false;
    CHECK(is_facet_generic(p) == generic);
  }
}

TEST_CASE("translation and reflection act on facet data") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (const auto& p : corpus()) {
    Vec shift(p.dim());
    for (int i = 0; i < p.dim(); ++i) shift(i) = g(rng);
    const Polytope q = p.translated(shift);
    const Polytope r = p.reflected();
    for (std::size_t k = 0; k < p.facet_data().size(); ++k) {
      const auto& a = p.facet_data()[k];
      CHECK((q.facet_data()[k].normal - a.normal).norm() <= 1e-12);
      CHECK(q.facet_data()[k].area == doctest::Approx(a.area).epsilon(1e-12));
      CHECK((q.facet_data()[k].anchor - (a.anchor + shift)).norm() <= 1e-12);
      CHECK((r.facet_data()[k].normal + a.normal).norm() <= 1e-12);
      CHECK(r.facet_data()[k].area == doctest::Approx(a.area).epsilon(1e-12));
    }
    CHECK(volume(r) == doctest::Approx(volume(p)).epsilon(1e-12));
  }
}

TEST_CASE("invalid polytopes are rejected") {
  SUBCASE("bad vertex index") {
    CHECK_THROWS_AS(Polytope(2, {v2(0, 0), v2(1, 0), v2(0, 1)}, {{0, 1}, {1, 2}, {2, 5}}),
                    ValidationError);
  }
  SUBCASE("clockwise polygon") {
    CHECK_THROWS_AS(Polytope(2, {v2(0, 0), v2(0, 1), v2(1, 0)}, {{0, 1}, {1, 2}, {2, 0}}),
                    ValidationError);
  }
  SUBCASE("non-convex polygon") {
    CHECK_THROWS_AS(Polytope(2, {v2(0, 0), v2(2, 0), v2(1, 0.2), v2(2, 2), v2(0, 2)},
                             {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}),
                    ValidationError);
  }
  SUBCASE("non-planar facet") {
    std::vector<Vec> v;
    for (int k = 0; k < 8; ++k) v.push_back(v3(k & 1, (k >> 1) & 1, (k >> 2) & 1));
    v[7] = v3(1.1, 1.1, 1.05);
    CHECK_THROWS_AS(Polytope(3, v,
                             {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2},
                              {1, 3, 7, 5}}),
                    ValidationError);
  }
  SUBCASE("degenerate simplex") {
    CHECK_THROWS_AS(Simplex({v2(0, 0), v2(1, 1), v2(2, 2)}), ValidationError);
  }
}
