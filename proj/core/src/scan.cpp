#include "polyrecon/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "polyrecon/errors.hpp"
#include "polyrecon/fourier.hpp"

namespace polyrecon {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::semicircle2d: return "semicircle";
    case SurfaceKind::hemisphere3d: return "hemisphere";
    case SurfaceKind::ewald3d: return "ewald";
  }
  return "unknown";
}

SurfaceKind parse_surface_kind(std::string_view text) {
  if (text == "semicircle" || text == "semicircle2d") return SurfaceKind::semicircle2d;
  if (text == "hemisphere" || text == "hemisphere3d") return SurfaceKind::hemisphere3d;
  if (text == "ewald" || text == "ewald3d") return SurfaceKind::ewald3d;
  throw ValidationError("unknown surface kind '" + std::string(text) + "'");
}

ScanSurface ScanSurface::semicircle(double radius) {
  return {SurfaceKind::semicircle2d, radius, 0};
}

ScanSurface ScanSurface::hemisphere(double radius) {
  return {SurfaceKind::hemisphere3d, radius, 2};
}

ScanSurface ScanSurface::ewald(int axis, double radius) {
  return {SurfaceKind::ewald3d, radius, axis};
}

std::array<double, 2> ScanSurface::domain(int k) const {
  if (k < 0 || k >= parameter_dim()) throw ValidationError("parameter axis out of range");
  if (kind == SurfaceKind::ewald3d) return k == 0 ? std::array{0.0, kPi / 2} : std::array{0.0, 2 * kPi};
  return {0.0, kPi};
}

void ScanSurface::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ValidationError("scan surface radius must be positive");
  if (kind == SurfaceKind::ewald3d && (axis < 0 || axis > 2))
    throw ValidationError("ewald axis must be 0, 1 or 2");
}

// ------------------------------------------------------------------- Grid

Grid Grid::over(const ScanSurface& surface, std::vector<int> counts) {
  const int k = surface.parameter_dim();
  if (counts.empty()) counts.assign(k, k == 1 ? 512 : 256);
  if (counts.size() == 1 && k == 2) counts.push_back(counts[0]);
  Grid g;
  g.counts = std::move(counts);
  for (int a = 0; a < k; ++a) g.ranges.push_back(surface.domain(a));
  g.validate(surface);
  return g;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int c : counts) n *= static_cast<std::size_t>(c);
  return n;
}

double Grid::step(int axis) const {
  return (ranges[axis][1] - ranges[axis][0]) / counts[axis];
}

double Grid::coordinate(int axis, int index) const {
  return ranges[axis][0] + (index + 0.5) * step(axis);
}

std::array<int, 2> Grid::unflatten(std::size_t flat) const {
  if (counts.size() == 1) return {static_cast<int>(flat), 0};
  return {static_cast<int>(flat / counts[1]), static_cast<int>(flat % counts[1])};
}

Vec Grid::parameter(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Vec t(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t a = 0; a < counts.size(); ++a)
    t(a) = coordinate(static_cast<int>(a), idx[a]);
  return t;
}

void Grid::validate(const ScanSurface& surface) const {
  const int k = surface.parameter_dim();
  if (static_cast<int>(counts.size()) != k || static_cast<int>(ranges.size()) != k)
    throw ValidationError("grid has " + std::to_string(counts.size()) +
                          " axes, surface needs " + std::to_string(k));
  for (int a = 0; a < k; ++a) {
    if (counts[a] < 2) throw ValidationError("grid counts must be >= 2");
    const auto d = surface.domain(a);
    const auto r = ranges[a];
    if (!(r[0] < r[1]) || r[0] < d[0] || r[1] > d[1])
      throw ValidationError("grid range outside the surface domain");
  }
}

bool Grid::covers_axis(const ScanSurface& surface, int axis) const {
  const auto d = surface.domain(axis);
  return ranges[axis][0] == d[0] && ranges[axis][1] == d[1];
}

// ------------------------------------------------------------------ sigma

Vec sigma(const ScanSurface& surface, const Vec& t) {
  if (t.size() != surface.parameter_dim())
    throw ValidationError("parameter dimension mismatch");
  for (int a = 0; a < t.size(); ++a) {
    const auto d = surface.domain(a);
    if (!(t(a) >= d[0] && t(a) < d[1])) throw ValidationError("parameter outside the domain");
  }
  const double r = surface.radius;
  switch (surface.kind) {
    case SurfaceKind::semicircle2d:
      return Eigen::Vector2d(r * std::cos(t(0)), r * std::sin(t(0)));
    case SurfaceKind::hemisphere3d:
      return Eigen::Vector3d(r * std::sin(t(0)) * std::cos(t(1)),
                             r * std::sin(t(0)) * std::sin(t(1)), r * std::cos(t(0)));
    case SurfaceKind::ewald3d: {
      const int a = surface.axis, b = (a + 1) % 3, c = (a + 2) % 3;
      Eigen::Vector3d u;
      u(a) = std::cos(t(0));
      u(b) = std::sin(t(0)) * std::cos(t(1));
      u(c) = std::sin(t(0)) * std::sin(t(1));
      return 2.0 * r * u(a) * u;
    }
  }
  throw ValidationError("unknown surface kind");
}

// --------------------------------------------------------------- wrapping

std::optional<std::size_t> resolve_index(const ScanSurface& surface, const Grid& grid,
                                         long i, long j) {
  const long n1 = grid.counts[0];
  if (surface.kind == SurfaceKind::semicircle2d) {
    if (grid.covers_axis(surface, 0)) {
      if (i < 0) i += n1;
      else if (i >= n1) i -= n1;
    }
    if (i < 0 || i >= n1) return std::nullopt;
    return static_cast<std::size_t>(i);
  }
  const long n2 = grid.counts[1];
  const bool c1 = grid.covers_axis(surface, 0), c2 = grid.covers_axis(surface, 1);
  if (surface.kind == SurfaceKind::hemisphere3d) {
    if (c1 && c2 && (j < 0 || j >= n2)) {
      j += j < 0 ? n2 : -n2;
      i = n1 - 1 - i;
    }
    if (c1 && (i < 0 || i >= n1)) i += i < 0 ? n1 : -n1;
  } else {
    if (c2 && (j < 0 || j >= n2)) j += j < 0 ? n2 : -n2;
    if (c1 && c2 && n2 % 2 == 0 && i < 0 && j >= 0 && j < n2) {
      i = -1 - i;
      j = (j + n2 / 2) % n2;
    }
  }
  if (i < 0 || i >= n1 || j < 0 || j >= n2) return std::nullopt;
  return static_cast<std::size_t>(i * n2 + j);
}

std::vector<std::array<long, 2>> index_images(const ScanSurface& surface,
                                              const Grid& grid, long i, long j) {
  std::vector<std::array<long, 2>> out{{i, j}};
  const long n1 = grid.counts[0];
  const bool c1 = grid.covers_axis(surface, 0);
  if (surface.kind == SurfaceKind::semicircle2d) {
    if (c1) {
      out.push_back({i - n1, 0});
      out.push_back({i + n1, 0});
    }
    return out;
  }
  const long n2 = grid.counts[1];
  const bool c2 = grid.covers_axis(surface, 1);
  if (surface.kind == SurfaceKind::hemisphere3d) {
    if (c1) {
      out.push_back({i - n1, j});
      out.push_back({i + n1, j});
    }
    if (c1 && c2) {
      out.push_back({n1 - 1 - i, j - n2});
      out.push_back({n1 - 1 - i, j + n2});
    }
    return out;
  }
  if (c2) {
    out.push_back({i, j - n2});
    out.push_back({i, j + n2});
  }
  if (c1 && c2 && n2 % 2 == 0) {
    out.push_back({-1 - i, j - n2 / 2});
    out.push_back({-1 - i, j + n2 / 2});
  }
  return out;
}

// ---------------------------------------------------------------- pattern

double psi_value(const ScanSurface& surface, const Vec& t, double abs_phi, double lambda) {
  return sigma(surface, t).norm() * abs_phi / lambda;
}

Pattern simulate_pattern(const Polytope& polytope, const ScanSurface& surface,
                         const Grid& grid, double lambda, const ScanOptions& options) {
  surface.validate();
  grid.validate(surface);
  if (polytope.dim() != surface.dim())
    throw ValidationError("polytope dimension does not match the scan surface");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in (0, 1]");

  const TransformEvaluator transform(polytope);
  Pattern pattern{surface, grid, lambda, {}, {}};
  const std::size_t total = grid.size();
  pattern.abs_phi.resize(total);
  pattern.psi.resize(total);

  const std::size_t chunk = std::max<std::size_t>(1, options.chunk);
  const std::size_t chunks = (total + chunk - 1) / chunk;
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) {
      const std::size_t end = std::min(total, (c + 1) * chunk);
      for (std::size_t k = c * chunk; k < end; ++k) {
        const Vec t = grid.parameter(k);
        const double a = std::abs(transform(sigma(surface, t) / lambda));
        pattern.abs_phi[k] = a;
        pattern.psi[k] = psi_value(surface, t, a, lambda);
      }
    }
    } catch (...) {
      next = chunks;
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, chunks));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return pattern;
}

}  // namespace polyrecon
