#include "polyrecon/reconstruct.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "polyrecon/errors.hpp"

namespace polyrecon {

// -------------------------------------------------------------------- EGI

int EGI::dim() const {
  return vectors.empty() ? 0 : static_cast<int>(vectors.front().size());
}

double EGI::closure_residual() const {
  if (vectors.empty()) return 0.0;
  Vec sum = Vec::Zero(dim());
  for (const auto& m : vectors) sum += m;
  return sum.norm();
}

double EGI::total() const {
  double t = 0.0;
  for (const auto& m : vectors) t += m.norm();
  return t;
}

void EGI::validate(double tol) const {
  const int n = dim();
  if (n < 2) throw ValidationError("EGI needs vectors of dimension >= 2");
  Mat m(n, vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != n) throw ValidationError("EGI vectors differ in dimension");
    if (!(vectors[j].norm() > 0.0)) throw ValidationError("EGI vector of zero length");
    m.col(j) = vectors[j] / vectors[j].norm();
  }
  if (Eigen::FullPivLU<Mat>(m).rank() < n) throw ValidationError("EGI vectors do not span R^n");
  const double r = closure_residual();
  if (r > tol * total())
    throw ValidationError("EGI does not close: |sum m_j| = " + std::to_string(r) +
                          ", allowed " + std::to_string(tol * total()));
}

EGI egi_of(const Polytope& polytope) {
  EGI e;
  for (const auto& f : polytope.facet_data()) e.vectors.push_back(f.area * f.normal);
  return e;
}

EGI egi_of(const FacetIndicatorSet& set, const SignAssignment& signs) {
  if (signs.signs.size() != set.size()) throw ValidationError("sign vector has wrong length");
  EGI e;
  for (std::size_t j = 0; j < set.size(); ++j)
    e.vectors.push_back(signs.signs[j] * set.entries[j].area * set.entries[j].normal);
  return e;
}

// ---------------------------------------------------------- halfspace hull

namespace {

struct Hull {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> facets;
  std::vector<int> rows;  // originating row of each facet
};

void next_subset(std::vector<int>& idx, int total, bool& done) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == total - k + i) --i;
  if (i < 0) {
    done = true;
    return;
  }
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
}

int affine_rank(const std::vector<Vec>& points, const std::vector<int>& idx) {
  if (idx.size() < 2) return 0;
  Mat m(points[idx[0]].size(), idx.size() - 1);
  for (std::size_t k = 1; k < idx.size(); ++k) m.col(k - 1) = points[idx[k]] - points[idx[0]];
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

Hull build_hull(const HalfspaceSystem& system) {
  const int n = system.dim;
  if (n < 2) throw ValidationError("halfspace system dimension must be >= 2");
  if (static_cast<int>(system.rows.size()) < n + 1)
    throw ValidationError("halfspace system needs at least n+1 rows");

  // normalized rows a.x <= b
  std::vector<Vec> a;
  std::vector<double> b;
  double scale = 1.0;
  for (const auto& row : system.rows) {
    if (row.normal.size() != n) throw ValidationError("halfspace row has wrong dimension");
    const double len = row.normal.norm();
    if (!(len > 0.0) || !std::isfinite(row.rhs)) throw ValidationError("degenerate halfspace row");
    const double sign = row.relation == Relation::less_equal ? 1.0 : -1.0;
    a.push_back(sign * row.normal / len);
    b.push_back(sign * row.rhs / len);
    scale = std::max(scale, 1.0 + std::abs(b.back()));
  }
  const int original = static_cast<int>(a.size());
  const double box = 1e6 * scale;
  for (int i = 0; i < n; ++i) {
    a.push_back(Vec::Unit(n, i));
    b.push_back(box);
    a.push_back(-Vec::Unit(n, i));
    b.push_back(box);
  }
  const int total = static_cast<int>(a.size());
  const double feas_tol = 1e-9 * scale;
  const double merge_tol = 1e-8 * scale;

  std::vector<Vec> candidates;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Mat m(n, n);
  Vec rhs(n);
  for (bool done = false; !done; next_subset(idx, total, done)) {
    for (int k = 0; k < n; ++k) {
      m.row(k) = a[idx[k]].transpose();
      rhs(k) = b[idx[k]];
    }
    Eigen::PartialPivLU<Mat> lu(m);
    if (std::abs(lu.determinant()) < 1e-12) continue;
    const Vec x = lu.solve(rhs);
    if (!x.allFinite()) continue;
    bool feasible = true;
    for (int r = 0; r < total && feasible; ++r) feasible = a[r].dot(x) <= b[r] + feas_tol;
    if (!feasible) continue;
    bool fresh = true;
    for (const auto& c : candidates)
      if ((c - x).lpNorm<Eigen::Infinity>() <= merge_tol) {
        fresh = false;
        break;
      }
    if (fresh) candidates.push_back(x);
  }
  if (candidates.empty()) throw ReconstructionError("halfspace system is infeasible", 0.0);
  for (const auto& c : candidates)
    if (c.lpNorm<Eigen::Infinity>() >= box * (1.0 - 1e-9))
      throw ReconstructionError("halfspace system is unbounded", 0.0);
  {
    std::vector<int> all(candidates.size());
    std::iota(all.begin(), all.end(), 0);
    if (affine_rank(candidates, all) < n)
      throw ReconstructionError("feasible region is not full-dimensional", 0.0);
  }

  double diameter = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      diameter = std::max(diameter, (candidates[i] - candidates[j]).norm());
  const double on_tol = kGeometryTolerance * diameter;

  // facet candidates: rows whose contact set has affine rank n-1
  std::vector<std::vector<int>> contact;
  std::vector<int> contact_row;
  std::map<std::vector<int>, bool> seen;
  for (int r = 0; r < original; ++r) {
    std::vector<int> on;
    for (std::size_t v = 0; v < candidates.size(); ++v)
      if (std::abs(a[r].dot(candidates[v]) - b[r]) <= on_tol) on.push_back(static_cast<int>(v));
    if (static_cast<int>(on.size()) < n || affine_rank(candidates, on) < n - 1) continue;
    if (seen.count(on)) continue;
    seen[on] = true;
    contact.push_back(on);
    contact_row.push_back(r);
  }

  // keep only extreme points: those whose facet normals span R^n
  std::vector<int> remap(candidates.size(), -1);
  Hull hull;
  hull.dim = n;
  for (std::size_t v = 0; v < candidates.size(); ++v) {
    std::vector<Vec> normals;
    for (std::size_t f = 0; f < contact.size(); ++f)
      if (std::find(contact[f].begin(), contact[f].end(), static_cast<int>(v)) != contact[f].end())
        normals.push_back(a[contact_row[f]]);
    if (static_cast<int>(normals.size()) < n) continue;
    Mat nm(n, normals.size());
    for (std::size_t k = 0; k < normals.size(); ++k) nm.col(k) = normals[k];
    Eigen::FullPivLU<Mat> lu(nm);
    lu.setThreshold(1e-10);
    if (lu.rank() < n) continue;
    remap[v] = static_cast<int>(hull.vertices.size());
    hull.vertices.push_back(candidates[v]);
  }

  for (std::size_t f = 0; f < contact.size(); ++f) {
    std::vector<int> face;
    for (int v : contact[f])
      if (remap[v] >= 0) face.push_back(remap[v]);
    const Vec& normal = a[contact_row[f]];
    if (n == 2) {
      if (face.size() != 2) throw ReconstructionError("malformed polygon edge", 0.0);
      const Vec e = hull.vertices[face[1]] - hull.vertices[face[0]];
      if (e(1) * normal(0) - e(0) * normal(1) < 0.0) std::swap(face[0], face[1]);
    } else if (n == 3) {
      Vec c = Vec::Zero(3);
      for (int v : face) c += hull.vertices[v];
      c /= static_cast<double>(face.size());
      const Eigen::Vector3d nn = normal;
      const Eigen::Vector3d u = (hull.vertices[face[0]] - c).normalized();
      const Eigen::Vector3d w = nn.cross(u);
      std::vector<std::pair<double, int>> order;
      for (int v : face) {
        const Eigen::Vector3d d = hull.vertices[v] - c;
        order.push_back({std::atan2(d.dot(w), d.dot(u)), v});
      }
      std::sort(order.begin(), order.end());
      for (std::size_t k = 0; k < face.size(); ++k) face[k] = order[k].second;
    } else if (static_cast<int>(face.size()) != n) {
      throw ReconstructionError("non-simplicial facet in dimension >= 4", 0.0);
    }
    hull.facets.push_back(std::move(face));
    hull.rows.push_back(contact_row[f]);
  }
  return hull;
}

double polygon_area_3d(const Hull& hull, const std::vector<int>& face) {
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k < face.size(); ++k) {
    const Eigen::Vector3d p = hull.vertices[face[k]];
    const Eigen::Vector3d q = hull.vertices[face[(k + 1) % face.size()]];
    acc += p.cross(q);
  }
  return 0.5 * acc.norm();
}

}  // namespace

Polytope halfspaces_to_vertices(const HalfspaceSystem& system) {
  Hull hull = build_hull(system);
  return Polytope(hull.dim, std::move(hull.vertices), std::move(hull.facets));
}

// ------------------------------------------------------------ sign search

std::vector<SignAssignment> resolve_signs(const FacetIndicatorSet& set, double tol) {
  const std::size_t f = set.size();
  if (f == 0) throw ValidationError("empty indicator set");
  if (f > 30) throw ValidationError("sign enumeration supports at most 30 entries");
  if (!(tol >= 0.0)) throw ValidationError("tolerance must be >= 0");
  set.validate();
  const int n = set.dim;
  Mat normals(n, f);
  for (std::size_t j = 0; j < f; ++j) normals.col(j) = set.entries[j].normal;
  if (Eigen::FullPivLU<Mat>(normals).rank() < n)
    throw ValidationError("indicator normals do not span R^n");

  std::vector<Vec> m;
  double total = 0.0;
  for (const auto& e : set.entries) {
    m.push_back(e.area * e.normal);
    total += e.area;
  }
  auto exact_residual = [&](const std::vector<int>& eps) {
    Vec s = Vec::Zero(n);
    for (std::size_t j = 0; j < f; ++j) s += eps[j] * m[j];
    return s.norm() / total;
  };

  std::vector<int> eps(f, 1);
  Vec sum = Vec::Zero(n);
  for (const auto& v : m) sum += v;
  std::vector<SignAssignment> out;
  double best = INFINITY;
  const std::uint64_t count = std::uint64_t{1} << (f - 1);
  const double slack = 1e-12 * static_cast<double>(f);
  for (std::uint64_t k = 0; k < count; ++k) {
    if (k > 0) {
      // Gray code: flip entry 1 + (index of lowest set bit of k)
      const int bit = std::countr_zero(k);
      const std::size_t j = static_cast<std::size_t>(bit) + 1;
      eps[j] = -eps[j];
      sum += 2.0 * eps[j] * m[j];
      if ((k & 1023) == 0) {
        sum.setZero();
        for (std::size_t i = 0; i < f; ++i) sum += eps[i] * m[i];
      }
    }
    const double r = sum.norm() / total;
    best = std::min(best, r);
    if (r <= tol + slack) {
      const double exact = exact_residual(eps);
      if (exact <= tol) out.push_back({eps, exact});
    }
  }
  if (out.empty())
    throw ReconstructionError("no sign assignment satisfies the closure condition; best "
                              "relative residual " + std::to_string(best),
                              best);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.residual < y.residual; });
  return out;
}

// ---------------------------------------------------------------- simplex

SimplexReconstruction reconstruct_simplex(const FacetIndicatorSet& set) {
  set.validate();
  const int n = set.dim;
  if (static_cast<int>(set.size()) != n + 1)
    throw ValidationError("simplex reconstruction needs exactly n+1 entries");

  // entry of largest area first, the rest in input order
  int largest = 0;
  for (int j = 1; j <= n; ++j)
    if (set.entries[j].area > set.entries[largest].area) largest = j;
  std::vector<int> order{largest};
  for (int j = 0; j <= n; ++j)
    if (j != largest) order.push_back(j);

  std::vector<Vec> nrm;
  std::vector<double> area;
  for (int j : order) {
    nrm.push_back(set.entries[j].normal);
    area.push_back(set.entries[j].area);
  }
  auto n_matrix = [&](int skip) {
    Mat m(n, n);
    int col = 0;
    for (int k = 0; k <= n; ++k)
      if (k != skip) m.col(col++) = nrm[k];
    return m;
  };
  std::vector<double> det(n + 1);
  for (int j = 0; j <= n; ++j) {
    det[j] = n_matrix(j).determinant();
    if (std::abs(det[j]) <= 1e-12)
      throw ValidationError("indicator normals are not in general position");
  }

  double product = factorial(n - 1) * std::abs(det[0]);
  for (int j = 1; j <= n; ++j) product *= area[j];
  const double a = std::pow(product, 1.0 / (n - 1)) / area[0];

  HalfspaceSystem system{n, {}};
  system.rows.push_back({nrm[0], Relation::less_equal, a});
  for (int j = 1; j <= n; ++j) {
    const double side = ((j + 1) % 2 == 0 ? 1.0 : -1.0) * det[0] / det[j];
    system.rows.push_back(
        {nrm[j], side > 0.0 ? Relation::greater_equal : Relation::less_equal, 0.0});
  }

  // v_0 at the origin; v_k on n_0.x = a and n_j.x = 0 for j != 0, k
  std::vector<Vec> vertices{Vec::Zero(n)};
  for (int k = 1; k <= n; ++k) {
    Mat m(n, n);
    Vec rhs = Vec::Zero(n);
    int row = 0;
    for (int j = 0; j <= n; ++j) {
      if (j == k) continue;
      m.row(row) = nrm[j].transpose();
      if (j == 0) rhs(row) = a;
      ++row;
    }
    vertices.push_back(m.partialPivLu().solve(rhs));
  }
  SimplexReconstruction out{Simplex(std::move(vertices)), std::move(system), a, 0.0};

  const Polytope p = Polytope::from_simplex(out.simplex);
  const auto& fd = p.facet_data();
  for (int j = 0; j <= n; ++j) {
    double match = INFINITY;
    for (const auto& f : fd)
      if (std::abs(std::abs(f.normal.dot(nrm[j])) - 1.0) < 1e-6)
        match = std::abs(f.area - area[j]) / area[j];
    out.area_residual = std::max(out.area_residual, match);
  }
  return out;
}

// --------------------------------------------------------------------- 2D

Polytope reconstruct_polygon_2d(const EGI& egi, double closure_tol) {
  if (egi.dim() != 2) throw ValidationError("reconstruct_polygon_2d needs a 2D EGI");
  egi.validate(closure_tol);
  std::vector<Vec> m = egi.vectors;
  std::stable_sort(m.begin(), m.end(), [](const Vec& x, const Vec& y) {
    return std::atan2(x(1), x(0)) < std::atan2(y(1), y(0));
  });
  const std::size_t f = m.size();
  std::vector<Vec> chain{Vec::Zero(2)};
  for (std::size_t k = 0; k < f; ++k) chain.push_back(chain.back() + m[k]);
  const Vec gap = chain.back();
  chain.pop_back();
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> facets;
  for (std::size_t k = 0; k < f; ++k) {
    const Vec p = chain[k] - (static_cast<double>(k) / f) * gap;
    vertices.push_back(Eigen::Vector2d(-p(1), p(0)));
    facets.push_back({static_cast<int>(k), static_cast<int>((k + 1) % f)});
  }
  return Polytope(2, std::move(vertices), std::move(facets));
}

// --------------------------------------------------------------------- 3D

FitResult reconstruct_polytope_3d(const EGI& egi, const FitOptions& options) {
  if (egi.dim() != 3) throw ValidationError("reconstruct_polytope_3d needs a 3D EGI");
  egi.validate(options.closure_tol);
  const std::size_t f = egi.vectors.size();
  std::vector<Vec> normals;
  std::vector<double> target;
  for (const auto& m : egi.vectors) {
    target.push_back(m.norm());
    normals.push_back(m / m.norm());
  }
  for (std::size_t i = 0; i < f; ++i)
    for (std::size_t j = i + 1; j < f; ++j)
      if (normals[i].dot(normals[j]) > 1.0 - 1e-9)
        throw ValidationError("EGI contains two vectors with the same direction");
  const double total = std::accumulate(target.begin(), target.end(), 0.0);

  std::size_t evaluations = 0;
  // facet areas of {n_j . x <= h_j}; empty when a facet vanishes or the hull fails
  auto areas = [&](const std::vector<double>& h) -> std::optional<std::vector<double>> {
    ++evaluations;
    HalfspaceSystem sys{3, {}};
    for (std::size_t j = 0; j < f; ++j) sys.rows.push_back({normals[j], Relation::less_equal, h[j]});
    Hull hull;
    try {
      hull = build_hull(sys);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    std::vector<double> out(f, 0.0);
    for (std::size_t k = 0; k < hull.facets.size(); ++k)
      out[hull.rows[k]] = polygon_area_3d(hull, hull.facets[k]);
    for (double x : out)
      if (!(x > 0.0)) return std::nullopt;
    return out;
  };
  auto objective = [&](const std::vector<double>& ar) {
    double s = 0.0;
    for (std::size_t j = 0; j < f; ++j) s += (ar[j] - target[j]) * (ar[j] - target[j]);
    return s;
  };

  std::vector<double> h(f, 1.0);
  auto start = areas(h);
  if (!start) throw ReconstructionError("initial support parameters give no polytope", INFINITY);
  const double start_total = std::accumulate(start->begin(), start->end(), 0.0);
  const double rescale = std::sqrt(total / start_total);
  for (double& x : h) x *= rescale;
  auto current = areas(h);
  if (!current) throw ReconstructionError("rescaled support parameters give no polytope", INFINITY);
  double value = objective(*current);

  const double goal = (options.tol * total) * (options.tol * total);
  double step = 0.25 * rescale;
  const double min_step = 1e-15 * rescale;
  bool converged = value <= goal;
  while (!converged && step > min_step && evaluations < options.max_evaluations) {
    bool improved = false;
    for (std::size_t j = 0; j < f && !converged; ++j) {
      for (double dir : {1.0, -1.0}) {
        // keep stepping while it helps
        while (evaluations < options.max_evaluations) {
          std::vector<double> trial = h;
          trial[j] += dir * step;
          const auto ar = areas(trial);
          if (!ar) break;
          const double v = objective(*ar);
          if (!(v < value)) break;
          h = std::move(trial);
          value = v;
          current = ar;
          improved = true;
          if (value <= goal) {
            converged = true;
            break;
          }
        }
        if (converged) break;
      }
    }
    if (!improved) step *= 0.5;
  }

  FitResult result{halfspaces_to_vertices([&] {
                     HalfspaceSystem sys{3, {}};
                     for (std::size_t j = 0; j < f; ++j)
                       sys.rows.push_back({normals[j], Relation::less_equal, h[j]});
                     return sys;
                   }()),
                   h, 0.0, evaluations, converged};
  for (std::size_t j = 0; j < f; ++j)
    result.residual = std::max(result.residual, std::abs((*current)[j] - target[j]) / target[j]);
  result.polytope = result.polytope.translated(-centroid(result.polytope));
  return result;
}

}  // namespace polyrecon
