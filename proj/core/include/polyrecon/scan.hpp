#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyrecon/geometry.hpp"

namespace polyrecon {

enum class SurfaceKind { semicircle2d, hemisphere3d, ewald3d };

std::string to_string(SurfaceKind kind);
/// Accepts "semicircle", "hemisphere", "ewald" and the *2d / *3d spellings.
SurfaceKind parse_surface_kind(std::string_view text);

/// Parameterized scan surface sigma: D -> R^n.
///
///  semicircle2d  sigma(t) = r (cos t, sin t),                     D = [0, pi)
///  hemisphere3d  sigma(t) = r (sin t1 cos t2, sin t1 sin t2, cos t1),
///                                                       D = [0, pi) x [0, pi)
///  ewald3d       sigma(t) = 2 r u_a(t) u(t) with u the unit vector of polar
///                angle t1 from the axis e_a and azimuth t2, D = [0, pi/2) x
///                [0, 2 pi). This is the sphere of radius r centred at r e_a,
///                which touches the hyperplane x_a = 0 at the origin.
struct ScanSurface {
  SurfaceKind kind = SurfaceKind::hemisphere3d;
  double radius = 1.0;
  int axis = 2;  // ewald3d only

  static ScanSurface semicircle(double radius = 1.0);
  static ScanSurface hemisphere(double radius = 1.0);
  static ScanSurface ewald(int axis = 2, double radius = 1.0);

  int dim() const noexcept { return kind == SurfaceKind::semicircle2d ? 2 : 3; }
  int parameter_dim() const noexcept { return dim() - 1; }
  /// Half-open domain [lo, hi) of parameter axis k.
  std::array<double, 2> domain(int k) const;

  void validate() const;
};

/// Cell-centred sampling grid: sample i of axis k sits at
/// lo_k + (i + 1/2) (hi_k - lo_k) / count_k.
struct Grid {
  std::vector<int> counts;
  std::vector<std::array<double, 2>> ranges;

  /// Full-domain grid; 512 samples in 2D, 256 x 256 in 3D when counts is empty.
  static Grid over(const ScanSurface& surface, std::vector<int> counts = {});

  std::size_t size() const;
  double coordinate(int axis, int index) const;
  double step(int axis) const;
  /// Row-major multi-index (last axis fastest).
  std::array<int, 2> unflatten(std::size_t flat) const;
  Vec parameter(std::size_t flat) const;

  void validate(const ScanSurface& surface) const;
  bool covers_axis(const ScanSurface& surface, int axis) const;
};

Vec sigma(const ScanSurface& surface, const Vec& t);

/// Resolves a possibly out-of-range multi-index to a grid sample whose sigma
/// is the same or the antipodal direction (|F| is even, so both carry the same
/// field value). Wrapping applies only along axes the grid covers entirely.
std::optional<std::size_t> resolve_index(const ScanSurface& surface,
                                         const Grid& grid, long i, long j = 0);

/// Equivalent positions of sample (i, j) in extended index space, including
/// itself. Used for wrap-aware distances.
std::vector<std::array<long, 2>> index_images(const ScanSurface& surface,
                                              const Grid& grid, long i, long j = 0);

struct Pattern {
  ScanSurface surface;
  Grid grid;
  double lambda = 0.01;
  std::vector<double> abs_phi;
  std::vector<double> psi;

  std::size_t size() const noexcept { return psi.size(); }
};

/// psi = |sigma(t)| |phi| / lambda.
double psi_value(const ScanSurface& surface, const Vec& t, double abs_phi,
                 double lambda);

struct ScanOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::size_t chunk = 2048;
};

/// Samples |phi_{P, sigma(t)}(lambda)| and psi over the grid. Output does not
/// depend on the thread count or chunking.
Pattern simulate_pattern(const Polytope& polytope, const ScanSurface& surface,
                         const Grid& grid, double lambda,
                         const ScanOptions& options = {});

}  // namespace polyrecon
