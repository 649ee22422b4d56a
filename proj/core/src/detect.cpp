#include "polyrecon/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyrecon/errors.hpp"

namespace polyrecon {

std::string to_string(DetectionMethod method) {
  return method == DetectionMethod::smooth ? "smooth" : "cluster";
}

DetectionMethod parse_detection_method(std::string_view text) {
  if (text == "smooth") return DetectionMethod::smooth;
  if (text == "cluster") return DetectionMethod::cluster;
  throw ValidationError("unknown detection method '" + std::string(text) + "'");
}

void DetectionConfig::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ValidationError("theta must be positive");
  if (window < 1 || window % 2 == 0) throw ValidationError("smoothing window must be odd and >= 1");
  if (!(cluster_radius >= 0.0)) throw ValidationError("cluster radius must be >= 0");
}

void FacetIndicatorSet::validate() const {
  if (dim < 2) throw ValidationError("indicator set dimension must be >= 2");
  for (const auto& e : entries) {
    if (e.normal.size() != dim) throw ValidationError("indicator normal has wrong dimension");
    if (std::abs(e.normal.norm() - 1.0) > 1e-9) throw ValidationError("indicator normal is not unit");
    if (!(e.area > 0.0) || !std::isfinite(e.area))
      throw ValidationError("indicator area must be positive");
  }
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      if (std::abs(entries[i].normal.dot(entries[j].normal)) > 1.0 - 1e-6)
        throw ValidationError("indicator entries " + std::to_string(i) + " and " +
                              std::to_string(j) + " have parallel normals");
}

FacetIndicatorSet indicator_set(const Polytope& polytope) {
  FacetIndicatorSet set{polytope.dim(), {}};
  for (const auto& f : polytope.facet_data()) set.entries.push_back({f.normal, f.area});
  return set;
}

namespace {

void check_window(const Pattern& pattern, int window) {
  for (int c : pattern.grid.counts)
    if (window >= c) throw ValidationError("smoothing window must be smaller than the grid");
}

std::array<long, 2> position(const Pattern& pattern, std::size_t flat) {
  const auto idx = pattern.grid.unflatten(flat);
  return {idx[0], idx[1]};
}

Vec direction(const Pattern& pattern, std::size_t flat) {
  const Vec s = sigma(pattern.surface, pattern.grid.parameter(flat));
  return s / s.norm();
}

FacetIndicatorSet finish(const Pattern& pattern, std::vector<std::size_t> peaks) {
  std::sort(peaks.begin(), peaks.end());
  FacetIndicatorSet set{pattern.surface.dim(), {}};
  for (std::size_t k : peaks) set.entries.push_back({direction(pattern, k), pattern.psi[k]});
  set.validate();
  return set;
}

}  // namespace

std::vector<double> box_filter(const Pattern& pattern, const std::vector<double>& field,
                               int window) {
  if (window < 1 || window % 2 == 0) throw ValidationError("smoothing window must be odd and >= 1");
  check_window(pattern, window);
  const auto& grid = pattern.grid;
  const auto& surface = pattern.surface;
  const long half = window / 2;
  const int axes = static_cast<int>(grid.counts.size());
  std::vector<double> current = field, next(field.size());
  for (int axis = axes - 1; axis >= 0; --axis) {
    for (std::size_t k = 0; k < current.size(); ++k) {
      const auto [i, j] = position(pattern, k);
      double sum = 0.0;
      int used = 0;
      for (long d = -half; d <= half; ++d) {
        const auto r = axis == 0 ? resolve_index(surface, grid, i + d, j)
                                 : resolve_index(surface, grid, i, j + d);
        if (!r) continue;
        sum += current[*r];
        ++used;
      }
      next[k] = sum / used;
    }
    std::swap(current, next);
  }
  return current;
}

std::vector<std::size_t> strict_local_maxima(const Pattern& pattern,
                                             const std::vector<double>& field) {
  const auto& grid = pattern.grid;
  const bool planar = grid.counts.size() == 1;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const auto [i, j] = position(pattern, k);
    bool strict = true;
    int compared = 0;
    for (long di = -1; di <= 1 && strict; ++di) {
      for (long dj = planar ? 0 : -1; dj <= (planar ? 0 : 1); ++dj) {
        if (di == 0 && dj == 0) continue;
        const auto r = resolve_index(pattern.surface, grid, i + di, j + dj);
        if (!r || *r == k) continue;
        ++compared;
        // ties go to the lower flat index so plateaus yield one maximum
        const bool above = field[k] > field[*r] || (field[k] == field[*r] && k < *r);
        if (!above) {
          strict = false;
          break;
        }
      }
    }
    if (strict && compared > 0) out.push_back(k);
  }
  return out;
}

FacetIndicatorSet detect_smooth(const Pattern& pattern, const DetectionConfig& cfg) {
  cfg.validate();
  const auto smoothed = box_filter(pattern, pattern.psi, cfg.window);
  std::vector<std::size_t> peaks;
  for (std::size_t k : strict_local_maxima(pattern, smoothed))
    if (pattern.psi[k] > cfg.theta) peaks.push_back(k);
  return finish(pattern, std::move(peaks));
}

FacetIndicatorSet detect_cluster(const Pattern& pattern, const DetectionConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> maxima;
  for (std::size_t k : strict_local_maxima(pattern, pattern.psi))
    if (pattern.psi[k] > cfg.theta) maxima.push_back(k);

  const std::size_t m = maxima.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<Vec> dirs;
  for (std::size_t k : maxima) dirs.push_back(direction(pattern, k));

  for (std::size_t a = 0; a < m; ++a) {
    const auto pa = position(pattern, maxima[a]);
    for (std::size_t b = a + 1; b < m; ++b) {
      if (dirs[a].dot(dirs[b]) < -(1.0 - 1e-6)) continue;
      const auto pb = position(pattern, maxima[b]);
      double best = INFINITY;
      for (const auto& img : index_images(pattern.surface, pattern.grid, pb[0], pb[1]))
        best = std::min(best, std::hypot(double(img[0] - pa[0]), double(img[1] - pa[1])));
      if (best <= cfg.cluster_radius) parent[find(a)] = find(b);
    }
  }

  std::vector<long> best(m, -1);
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t root = find(a);
    if (best[root] < 0 || pattern.psi[maxima[a]] > pattern.psi[maxima[best[root]]])
      best[root] = static_cast<long>(a);
  }
  std::vector<std::size_t> peaks;
  for (std::size_t a = 0; a < m; ++a)
    if (find(a) == a) peaks.push_back(maxima[best[a]]);
  return finish(pattern, std::move(peaks));
}

FacetIndicatorSet detect(const Pattern& pattern, const DetectionConfig& cfg) {
  return cfg.method == DetectionMethod::smooth ? detect_smooth(pattern, cfg)
                                               : detect_cluster(pattern, cfg);
}

}  // namespace polyrecon
