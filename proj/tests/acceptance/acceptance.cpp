// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "polyrecon/detect.hpp"
#include "polyrecon/fixtures.hpp"
#include "polyrecon/fourier.hpp"
#include "polyrecon/quadrature.hpp"
#include "polyrecon/reconstruct.hpp"
#include "polyrecon/scan.hpp"

using namespace polyrecon;
namespace fx = polyrecon::fixtures;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Vec random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vec s(n);
  for (int i = 0; i < n; ++i) s(i) = g(rng);
  return s.normalized();
}

double min_area(const Polytope& p) {
  double m = INFINITY;
  for (const auto& f : p.facet_data()) m = std::min(m, f.area);
  return m;
}

double diameter(const std::vector<Vec>& v) {
  double d = 0.0;
  for (const auto& a : v)
    for (const auto& b : v) d = std::max(d, (a - b).norm());
  return d;
}

// worst relative area error of `found` against the facets of `truth`, matched by |normal|
double area_error(const Polytope& truth, const FacetIndicatorSet& found) {
  double worst = 0.0;
  for (const auto& f : truth.facet_data()) {
    const FacetIndicator* best = nullptr;
    for (const auto& e : found.entries)
      if (!best || std::abs(e.normal.dot(f.normal)) > std::abs(best->normal.dot(f.normal)))
        best = &e;
    worst = std::max(worst, best ? std::abs(best->area - f.area) / f.area : INFINITY);
  }
  return worst;
}

Outcome transform_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logmag(0.0, 4.0);
  std::uniform_int_distribution<int> faces2(3, 10), faces3(5, 12);
  double worst = 0.0;
  const auto start = std::chrono::steady_clock::now();
  auto check = [&](const Polytope& p) {
    const double vol = volume(p);
    for (int k = 0; k < 3; ++k) {
      const Vec s = std::pow(10.0, logmag(rng)) * random_direction(rng, p.dim());
      const Complex exact = ft_polytope(p, s);
      const Complex quad = ft_quadrature(p, s, 1e-8 * vol).value;
      worst = std::max(worst, std::abs(exact - quad) / vol);
    }
  };
  for (int k = 0; k < 50; ++k) check(fx::random_polygon(faces2(rng), 1000 + k));
  for (int k = 0; k < 20; ++k) check(fx::random_polytope_3d(faces3(rng), 2000 + k));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(worst <= 1e-6, "worst relative error " + fmt("%.3g", worst));
  o.require(seconds <= 120.0, "runtime " + fmt("%.1f", seconds) + " s");
  o.detail = "worst |F - Q| / vol = " + fmt("%.3g", worst) + ", " + fmt("%.1f", seconds) + " s" +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome leading_order() {
  Outcome o;
  std::vector<Polytope> shapes{fx::regular_tetrahedron(), fx::deformed_octahedron(),
                               fx::perturbed_octahedron()};
  for (std::uint64_t seed = 0; shapes.size() < 10; ++seed)
    shapes.push_back(Polytope::from_simplex(fx::random_simplex(3, seed)));
  double lo = INFINITY, hi = 0.0;
  int facets = 0;
  for (const auto& p : shapes) {
    o.require(is_facet_generic(p), "fixture is not facet-generic");
    for (const auto& f : p.facet_data()) {
      ++facets;
      std::vector<double> e;
      for (double lambda : {1e-2, 5e-3, 2.5e-3})
        e.push_back(std::abs(ft_wavelength(p, f.normal, lambda) -
                             asymptotic_leading_term(p, f.normal, lambda)));
      for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        const double r = e[k + 1] / e[k];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
  }
  o.require(lo >= 0.15 && hi <= 0.45, "ratio outside [0.15, 0.45]");
  o.detail = "e(l/2)/e(l) in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "] over " +
             std::to_string(facets) + " facets of 10 fixtures" +
             (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome hexagon_peaks() {
  Outcome o;
  const Polytope hex = fx::hexagon();
  const auto semi = ScanSurface::semicircle();
  const Pattern pat = simulate_pattern(hex, semi, Grid::over(semi, {512}), 0.01);
  DetectionConfig cfg;
  cfg.theta = 0.3 * min_area(hex);
  cfg.window = 11;
  const auto set = detect_smooth(pat, cfg);
  double worst_angle = 0.0;
  for (const auto& f : hex.facet_data()) {
    double best = INFINITY;
    for (const auto& e : set.entries)
      best = std::min(best, std::acos(std::min(1.0, std::abs(e.normal.dot(f.normal)))));
    worst_angle = std::max(worst_angle, best);
  }
  const double cells = worst_angle / pat.grid.step(0);
  const double err = area_error(hex, set);
  o.require(set.size() == 6, std::to_string(set.size()) + " detections");
  o.require(err <= 0.05, "area error");
  o.require(cells <= 2.0, "normal offset");
  o.detail = std::to_string(set.size()) + " detections, area error " + fmt("%.4f", err) +
             ", normal offset " + fmt("%.2f", cells) + " cells" +
             (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome tetrahedron_round_trip() {
  Outcome o;
  const Polytope tet = fx::regular_tetrahedron();
  const double d = tet.diameter();
  const auto hemi = ScanSurface::hemisphere();
  const Pattern pat = simulate_pattern(tet, hemi, Grid::over(hemi), 0.01);
  DetectionConfig cfg;
  cfg.theta = 0.3 * min_area(tet);
  const auto set = detect_smooth(pat, cfg);
  double detected = INFINITY;
  if (set.size() == 4)
    detected = oracle::aligned_distance(reconstruct_simplex(set).simplex.vertices(), tet.vertices()) / d;
  const double exact =
      oracle::aligned_distance(reconstruct_simplex(indicator_set(tet)).simplex.vertices(),
                               tet.vertices()) / d;
  o.require(set.size() == 4, std::to_string(set.size()) + " detections");
  o.require(detected <= 0.02, "detection path");
  o.require(exact <= 1e-9, "exact path");
  o.detail = "vertex error / diameter: detected " + fmt("%.3g", detected) + ", exact " +
             fmt("%.3g", exact) + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome octahedron_fit() {
  Outcome o;
  const Polytope octa = fx::deformed_octahedron();
  const auto hemi = ScanSurface::hemisphere();
  const Pattern pat = simulate_pattern(octa, hemi, Grid::over(hemi), 0.01);
  DetectionConfig cfg;
  cfg.theta = 0.3 * min_area(octa);
  const auto set = detect_smooth(pat, cfg);
  double detected = INFINITY;
  std::size_t survivors = 0;
  try {
    const auto signs = resolve_signs(set, 1e-2);
    survivors = signs.size();
    const auto fit = reconstruct_polytope_3d(egi_of(set, signs.front()), {.closure_tol = 1e-2});
    detected = area_error(octa, indicator_set(fit.polytope));
  } catch (const std::exception& e) {
    o.require(false, e.what());
  }
  const auto exact_fit = reconstruct_polytope_3d(egi_of(octa));
  const double exact = area_error(octa, indicator_set(exact_fit.polytope));
  o.require(set.size() == 8, std::to_string(set.size()) + " detections");
  o.require(detected <= 0.05, "detection path");
  o.require(exact <= 0.01, "exact path");
  o.detail = "facet area error: detected " + fmt("%.4f", detected) + " (" +
             std::to_string(survivors) + " sign assignment), exact EGI " + fmt("%.3g", exact) +
             (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome minkowski_suite() {
  Outcome o;
  std::vector<Polytope> corpus{fx::unit_triangle(),         fx::unit_square(),
                               fx::unit_cube(),             fx::regular_tetrahedron(),
                               fx::hexagon(),               fx::perturbed_octahedron(),
                               fx::deformed_octahedron(),   fx::ambiguous_hexagons().first,
                               fx::ambiguous_hexagons().second};
  for (std::uint64_t k = 0; k < 10; ++k) {
    corpus.push_back(fx::random_polygon(3 + static_cast<int>(k), 40 + k));
    corpus.push_back(fx::random_polytope_3d(5 + static_cast<int>(k), 60 + k));
  }
  double worst = 0.0;
  int recovered = 0, generic = 0;
  std::mt19937_64 rng(8);
  for (const auto& p : corpus) {
    const EGI egi = egi_of(p);
    worst = std::max(worst, egi.closure_residual() / egi.total());
    if (!is_facet_generic(p)) continue;
    ++generic;
    auto set = indicator_set(p);
    std::vector<int> truth;
    for (std::size_t j = 0; j < set.size(); ++j) {
      const int flip = j == 0 ? 1 : (rng() & 1 ? -1 : 1);
      set.entries[j].normal *= flip;
      truth.push_back(flip);
    }
    for (const auto& s : resolve_signs(set, 1e-9))
      if (s.signs == truth) {
        ++recovered;
        break;
      }
  }
  const auto ambiguous = resolve_signs(indicator_set(fx::ambiguous_hexagons().first), 1e-9).size();
  o.require(worst <= 1e-9, "closure");
  o.require(recovered == generic, "generating assignment missing");
  o.require(ambiguous >= 2, "ambiguity fixture");
  o.detail = "closure " + fmt("%.2g", worst) + ", generating assignment found " +
             std::to_string(recovered) + "/" + std::to_string(generic) + ", ambiguity fixture " +
             std::to_string(ambiguous) + " assignments" + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome invariances() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> logmag(-1.0, 3.0);
  double worst = 0.0, zero = 0.0;
  for (int k = 0; k < 40; ++k) {
    const Polytope p = k % 2 ? fx::random_polygon(4 + k % 7, 500 + k)
                             : fx::random_polytope_3d(5 + k % 8, 600 + k);
    const int n = p.dim();
    const double vol = volume(p);
    Vec shift(n);
    for (int i = 0; i < n; ++i) shift(i) = g(rng);
    const Vec s = std::pow(10.0, logmag(rng)) * random_direction(rng, n);
    const double m = std::abs(ft_polytope(p, s));
    worst = std::max({worst, std::abs(std::abs(ft_polytope(p.translated(shift), s)) - m) / vol,
                      std::abs(std::abs(ft_polytope(p.reflected(), s)) - m) / vol,
                      std::abs(std::abs(ft_polytope(p, -s)) - m) / vol});
    zero = std::max(zero, std::abs(ft_polytope(p, Vec::Zero(n)) - vol) / vol);
  }
  o.require(worst <= 1e-10, "modulus invariance");
  o.require(zero <= 1e-10, "F(0) = vol");
  o.detail = "worst modulus change " + fmt("%.2g", worst) + ", |F(0) - vol| / vol " +
             fmt("%.2g", zero) + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome round_trips() {
  Outcome o;
  double simplex_worst = 0.0, polygon_worst = 0.0;
  int simplex_fail = 0, polygon_fail = 0;
  for (int n : {2, 3, 4})
    for (std::uint64_t k = 0; k < 100; ++k) {
      const Simplex s = fx::random_simplex(n, 10000 * n + k);
      const auto set = indicator_set(Polytope::from_simplex(s));
      const auto rec = reconstruct_simplex(set);
      const double d = oracle::aligned_distance(rec.simplex.vertices(), s.vertices()) /
                       diameter(s.vertices());
      simplex_worst = std::max(simplex_worst, d);
      if (d > 1e-9 ||
          !oracle::same_indicators(set, indicator_set(Polytope::from_simplex(rec.simplex)), 1e-9, 1e-9))
        ++simplex_fail;
    }
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Polytope p = fx::random_polygon(3 + static_cast<int>(k % 10), 7000 + k);
    const Polytope q = reconstruct_polygon_2d(egi_of(p));
    const double d = q.vertices().size() <= 8
                         ? oracle::aligned_distance(q.vertices(), p.vertices()) / p.diameter()
                         : 0.0;
    polygon_worst = std::max(polygon_worst, d);
    if (d > 1e-9 || !oracle::same_indicators(indicator_set(p), indicator_set(q), 1e-9, 1e-9))
      ++polygon_fail;
  }
  o.require(simplex_fail == 0, std::to_string(simplex_fail) + " simplex failures");
  o.require(polygon_fail == 0, std::to_string(polygon_fail) + " polygon failures");
  o.detail = "300 simplices worst " + fmt("%.2g", simplex_worst) + ", 100 polygons worst " +
             fmt("%.2g", polygon_worst) + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"transform matches quadrature oracle", transform_oracle},
      {"leading-order residual ratio", leading_order},
      {"2D hexagon detection", hexagon_peaks},
      {"tetrahedron round trip", tetrahedron_round_trip},
      {"deformed octahedron fit", octahedron_fit},
      {"Minkowski invariants", minkowski_suite},
      {"modulus invariances", invariances},
      {"reconstruction round trips", round_trips},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu %s: %s (%s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
