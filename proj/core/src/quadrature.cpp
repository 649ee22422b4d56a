#include "polyrecon/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "polyrecon/errors.hpp"

namespace polyrecon {

namespace {

void compositions(int parts, int total, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    current.push_back(k);
    compositions(parts - 1, total - k, current, out);
    current.pop_back();
  }
}

double gm_weight(int dim, int s, int i) {
  const int d = 2 * s + 1;
  const double m = d + dim - 2 * i;
  const double sign = (i % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(2.0, -2 * s) * std::pow(m, d) /
         (factorial(i) * factorial(d + dim - i));
}

}  // namespace

GrundmannMoellerRule::GrundmannMoellerRule(int dim, int s) : dim_(dim), s_(s) {
  if (dim < 1) throw ValidationError("quadrature rule: dimension must be >= 1");
  if (s < 1) throw ValidationError("quadrature rule: parameter must be >= 1");
  const int d = 2 * s + 1;
  high_weight_.assign(s + 1, 0.0);
  low_weight_.assign(s + 1, 0.0);
  for (int i = 0; i <= s; ++i) {
    high_weight_[i] = gm_weight(dim, s, i);
    if (i >= 1) low_weight_[i] = gm_weight(dim, s - 1, i - 1);
    const double m = d + dim - 2 * i;
    std::vector<std::vector<int>> betas;
    std::vector<int> scratch;
    compositions(dim + 1, s - i, scratch, betas);
    for (const auto& beta : betas) {
      for (int j = 1; j <= dim; ++j) nodes_.push_back((2.0 * beta[j] + 1.0) / m);
      level_.push_back(i);
    }
  }
}

namespace {

QuadratureResult bisection_quadrature(const Simplex& simplex, const Vec& s,
                                      double tol, const QuadratureOptions& options) {
  const int n = simplex.dim();
  const GrundmannMoellerRule rule(n, options.rule_parameter);
  const auto& nodes = rule.nodes();
  const std::size_t npts = rule.size();

  struct Cell {
    std::vector<double> vertices;  // (n+1) x n row-major
    double scaled_volume;          // |det| of the edge matrix = n! vol
    int depth;
  };

  std::vector<Cell> stack;
  {
    Cell root{std::vector<double>((n + 1) * n), std::abs(simplex.signed_det()), 0};
    for (int v = 0; v <= n; ++v)
      for (int j = 0; j < n; ++j) root.vertices[v * n + j] = simplex.vertices()[v](j);
    stack.push_back(std::move(root));
  }

  QuadratureResult result;
  bool exhausted = false;
  std::vector<std::complex<double>> values(npts);
  std::vector<double> phase(n + 1);
  const double two_pi = 2.0 * std::numbers::pi;

  while (!stack.empty()) {
    Cell cell = std::move(stack.back());
    stack.pop_back();
    ++result.cells;

    for (int v = 0; v <= n; ++v) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += s(j) * cell.vertices[v * n + j];
      phase[v] = acc;
    }
    double lo_phase = 0.0, hi_phase = 0.0;
    for (int v = 1; v <= n; ++v) {
      const double z = phase[v] - phase[0];
      lo_phase = std::min(lo_phase, z);
      hi_phase = std::max(hi_phase, z);
    }
    for (std::size_t k = 0; k < npts; ++k) {
      double arg = 0.0;
      for (int j = 0; j < n; ++j) arg += nodes[k * n + j] * (phase[j + 1] - phase[0]);
      values[k] = {std::cos(arg), -std::sin(arg)};
    }
    const auto [hi, lo] = rule.apply(values);
    const std::complex<double> base{std::cos(phase[0]), -std::sin(phase[0])};
    const std::complex<double> estimate = cell.scaled_volume * base * hi;
    const double error = cell.scaled_volume * std::abs(hi - lo);
    const double cell_volume = cell.scaled_volume / factorial(n);

    const bool resolved = hi_phase - lo_phase <= two_pi && error <= tol * cell_volume;
    const bool can_split = cell.depth < options.max_depth &&
                           result.cells + stack.size() < options.max_cells;
    if (resolved || !can_split) {
      if (!resolved) exhausted = true;
      result.value += estimate;
      result.error_estimate += error;
      continue;
    }

    // bisect the edge with the largest phase change; ties go to the longer edge
    int best_a = 0, best_b = 1;
    double best_key = -1.0, best_len = -1.0;
    for (int a = 0; a <= n; ++a) {
      for (int b = a + 1; b <= n; ++b) {
        const double key = std::abs(phase[a] - phase[b]);
        double len = 0.0;
        for (int j = 0; j < n; ++j) {
          const double d = cell.vertices[a * n + j] - cell.vertices[b * n + j];
          len += d * d;
        }
        if (key > best_key * (1.0 + 1e-12) ||
            (key >= best_key * (1.0 - 1e-12) && len > best_len)) {
          best_key = key;
          best_len = len;
          best_a = a;
          best_b = b;
        }
      }
    }
    Cell left{cell.vertices, 0.5 * cell.scaled_volume, cell.depth + 1};
    Cell right{std::move(cell.vertices), left.scaled_volume, left.depth};
    for (int j = 0; j < n; ++j) {
      const double mid = 0.5 * (left.vertices[best_a * n + j] + left.vertices[best_b * n + j]);
      left.vertices[best_b * n + j] = mid;
      right.vertices[best_a * n + j] = mid;
    }
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }

  if (exhausted)
    throw ConvergenceError("quadrature budget exhausted; achieved error estimate " +
                               std::to_string(result.error_estimate),
                           result.error_estimate);
  return result;
}

// 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK qk15).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Simplex vertices sorted by their coordinate along `unit`.
struct SortedSimplex {
  std::vector<Vec> vertices;
  std::vector<double> heights;
};

SortedSimplex sort_along(const Simplex& simplex, const Vec& unit) {
  const int n = simplex.dim();
  std::vector<int> order(n + 1);
  for (int i = 0; i <= n; ++i) order[i] = i;
  std::vector<double> h(n + 1);
  for (int i = 0; i <= n; ++i) h[i] = unit.dot(simplex.vertices()[i]);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return h[a] < h[b]; });
  SortedSimplex out;
  for (int i : order) {
    out.vertices.push_back(simplex.vertices()[i]);
    out.heights.push_back(h[i]);
  }
  return out;
}

// Slice measure when the first `below` sorted vertices lie strictly under t.
// The section separating `below` from the rest is an affine product of two
// simplices; its staircase triangulation has one (n-1)-simplex per monotone
// lattice path.
double slice_measure_sorted(const SortedSimplex& ss, int below, const Vec& unit,
                            double t) {
  const int n = static_cast<int>(ss.vertices.size()) - 1;
  const int a = below - 1;
  auto point = [&](int i, int j) -> Vec {
    const int lo = i, hi = below + j;
    const double w = (t - ss.heights[lo]) / (ss.heights[hi] - ss.heights[lo]);
    return ss.vertices[lo] + w * (ss.vertices[hi] - ss.vertices[lo]);
  };
  const int steps = n - 1;
  double total = 0.0;
  Mat m(n, n);
  m.col(n - 1) = unit;
  for (unsigned mask = 0; mask < (1u << steps); ++mask) {
    if (std::popcount(mask) != a) continue;
    int i = 0, j = 0;
    const Vec origin = point(0, 0);
    for (int k = 0; k < steps; ++k) {
      if (mask & (1u << k)) ++i; else ++j;
      m.col(k) = point(i, j) - origin;
    }
    total += std::abs(m.determinant());
  }
  return total / factorial(n - 1);
}

QuadratureResult slab_quadrature(const Simplex& simplex, const Vec& s, double tol,
                                 const QuadratureOptions& options) {
  const double omega = s.norm();
  QuadratureResult result;
  if (omega == 0.0) {
    result.value = simplex.volume();
    result.cells = 1;
    return result;
  }
  const Vec unit = s / omega;
  const auto ss = sort_along(simplex, unit);
  const int n = simplex.dim();
  const double range = ss.heights.back() - ss.heights.front();
  const double budget = tol * simplex.volume();
  const double max_phase_step = 3.0 * std::numbers::pi;
  bool exhausted = false;

  struct Interval {
    double lo, hi;
    int depth;
  };
  std::vector<Interval> stack;
  for (int k = 0; k < n; ++k) {
    const double lo = ss.heights[k], hi = ss.heights[k + 1];
    if (!(hi > lo)) continue;
    stack.push_back({lo, hi, 0});
    while (!stack.empty()) {
      const Interval iv = stack.back();
      stack.pop_back();
      ++result.cells;
      const double half = 0.5 * (iv.hi - iv.lo);
      const double mid = 0.5 * (iv.hi + iv.lo);
      std::complex<double> kronrod = 0.0, gauss = 0.0;
      for (int q = 0; q < 8; ++q) {
        const int signs = (q == 7) ? 1 : 2;
        for (int sgn = 0; sgn < signs; ++sgn) {
          const double t = mid + (sgn == 0 ? 1.0 : -1.0) * half * kKronrodNodes[q];
          const std::complex<double> f =
              slice_measure_sorted(ss, k + 1, unit, t) *
              std::complex<double>(std::cos(omega * t), -std::sin(omega * t));
          kronrod += kKronrodWeights[q] * f;
          if (q % 2 == 1) gauss += kGaussWeights[q / 2] * f;
        }
      }
      kronrod *= half;
      gauss *= half;
      const double error = std::abs(kronrod - gauss);
      const bool resolved = omega * (iv.hi - iv.lo) <= max_phase_step &&
                            error <= budget * (iv.hi - iv.lo) / range;
      const bool can_split = iv.depth < options.max_depth &&
                             result.cells + stack.size() < options.max_cells;
      if (resolved || !can_split) {
        if (!resolved) exhausted = true;
        result.value += kronrod;
        result.error_estimate += error;
        continue;
      }
      stack.push_back({mid, iv.hi, iv.depth + 1});
      stack.push_back({iv.lo, mid, iv.depth + 1});
    }
  }
  if (exhausted)
    throw ConvergenceError("quadrature budget exhausted; achieved error estimate " +
                               std::to_string(result.error_estimate),
                           result.error_estimate);
  return result;
}

}  // namespace

double simplex_slice_measure(const Simplex& simplex, const Vec& unit, double t) {
  if (unit.size() != simplex.dim()) throw ValidationError("direction dimension mismatch");
  const auto ss = sort_along(simplex, unit);
  int below = 0;
  const int count = static_cast<int>(ss.heights.size());
  while (below < count && ss.heights[below] < t) ++below;
  // closed slice at the lowest height
  if (below == 0 && t == ss.heights[0])
    while (below < count - 1 && ss.heights[below] <= t) ++below;
  if (below == 0 || below == count) return 0.0;
  return slice_measure_sorted(ss, below, unit, t);
}

QuadratureResult ft_simplex_quadrature(const Simplex& simplex, const Vec& s,
                                       double tol, const QuadratureOptions& options) {
  if (simplex.dim() > 4) throw ValidationError("quadrature oracle supports n <= 4");
  if (!(tol >= 1e-10)) throw ValidationError("quadrature tolerance must be >= 1e-10");
  if (s.size() != simplex.dim()) throw ValidationError("wavevector dimension mismatch");
  if (!s.allFinite()) throw ValidationError("wavevector is not finite");
  if (options.method == QuadratureMethod::simplex_bisection)
    return bisection_quadrature(simplex, s, tol, options);
  return slab_quadrature(simplex, s, tol, options);
}

QuadratureResult ft_quadrature(const Polytope& polytope, const Vec& s, double tol,
                               const QuadratureOptions& options) {
  QuadratureResult total;
  for (const auto& simplex : triangulate(polytope)) {
    const auto part = ft_simplex_quadrature(simplex, s, tol, options);
    total.value += part.value;
    total.error_estimate += part.error_estimate;
    total.cells += part.cells;
  }
  return total;
}

}  // namespace polyrecon
