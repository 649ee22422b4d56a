#include "polyrecon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "polyrecon/errors.hpp"

namespace polyrecon {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

Vec generalized_cross(const Mat& edges) {
  const auto n = edges.rows();
  Vec c(n);
  Mat m(n, n);
  m.leftCols(n - 1) = edges;
  for (Eigen::Index i = 0; i < n; ++i) {
    m.col(n - 1).setZero();
    m(i, n - 1) = 1.0;
    c(i) = m.determinant();
  }
  return c;
}

// ---------------------------------------------------------------- Simplex

Simplex::Simplex(std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw ValidationError("simplex: no vertices");
  dim_ = static_cast<int>(vertices_.front().size());
  if (dim_ < 2) throw ValidationError("simplex: dimension must be >= 2");
  if (static_cast<int>(vertices_.size()) != dim_ + 1)
    throw ValidationError("simplex: need exactly n+1 vertices");
  for (const auto& v : vertices_) {
    if (v.size() != dim_) throw ValidationError("simplex: mixed dimensions");
    if (!v.allFinite()) throw ValidationError("simplex: non-finite vertex");
  }
  if (std::abs(signed_det()) <= 1e-12)
    throw ValidationError("simplex: vertices are affinely dependent");
}

Mat Simplex::edge_matrix() const {
  Mat t(dim_, dim_);
  for (int j = 0; j < dim_; ++j) t.col(j) = vertices_[j + 1] - vertices_[0];
  return t;
}

double Simplex::signed_det() const { return edge_matrix().determinant(); }

double Simplex::volume() const {
  return std::abs(signed_det()) / factorial(dim_);
}

// --------------------------------------------------------------- Polytope

namespace {

double vertex_diameter(const std::vector<Vec>& vs) {
  double d = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      d = std::max(d, (vs[i] - vs[j]).norm());
  return d;
}

std::string facet_label(std::size_t k) { return "facet " + std::to_string(k); }

}  // namespace

Polytope::Polytope(int dim, std::vector<Vec> vertices,
                   std::vector<std::vector<int>> facets)
    : dim_(dim), vertices_(std::move(vertices)), facets_(std::move(facets)) {
  if (dim_ < 2) throw ValidationError("polytope: dimension must be >= 2");
  if (static_cast<int>(vertices_.size()) < dim_ + 1)
    throw ValidationError("polytope: fewer than n+1 vertices");
  if (static_cast<int>(facets_.size()) < dim_ + 1)
    throw ValidationError("polytope: fewer than n+1 facets");
  for (const auto& v : vertices_) {
    if (v.size() != dim_) throw ValidationError("polytope: vertex dimension mismatch");
    if (!v.allFinite()) throw ValidationError("polytope: non-finite vertex");
  }
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t k = 0; k < facets_.size(); ++k) {
    const auto& f = facets_[k];
    if (static_cast<int>(f.size()) < dim_)
      throw ValidationError(facet_label(k) + " has fewer than n vertices");
    if (dim_ == 2 && f.size() != 2)
      throw ValidationError(facet_label(k) + ": 2D facets are edges [i, j]");
    if (dim_ >= 4 && static_cast<int>(f.size()) != dim_)
      throw ValidationError(facet_label(k) + ": facets must be simplicial for n >= 4");
    for (int idx : f)
      if (idx < 0 || idx >= nv)
        throw ValidationError(facet_label(k) + " references invalid vertex " +
                              std::to_string(idx));
    std::vector<int> sorted = f;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError(facet_label(k) + " repeats a vertex");
  }
  diameter_ = vertex_diameter(vertices_);
  if (diameter_ <= 0.0) throw ValidationError("polytope: zero diameter");
  validate_topology();
  compute_facets();
  validate_convexity();
  if (!(volume(*this) > 0.0)) throw ValidationError("polytope: zero volume");
}

Polytope Polytope::from_simplex(const Simplex& simplex) {
  const int n = simplex.dim();
  const auto& vs = simplex.vertices();
  std::vector<std::vector<int>> facets;
  if (n == 2) {
    if (simplex.signed_det() > 0)
      facets = {{0, 1}, {1, 2}, {2, 0}};
    else
      facets = {{0, 2}, {2, 1}, {1, 0}};
  } else {
    for (int k = 0; k <= n; ++k) {
      std::vector<int> f;
      for (int j = 0; j <= n; ++j)
        if (j != k) f.push_back(j);
      if (n == 3) {
        const Eigen::Vector3d a = vs[f[0]], b = vs[f[1]], c = vs[f[2]];
        const Eigen::Vector3d opposite = vs[k];
        if ((b - a).cross(c - a).dot(opposite - a) > 0) std::swap(f[1], f[2]);
      }
      facets.push_back(std::move(f));
    }
  }
  return Polytope(n, vs, std::move(facets));
}

Vec Polytope::vertex_centroid() const {
  Vec c = Vec::Zero(dim_);
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

void Polytope::validate_topology() const {
  const int nv = static_cast<int>(vertices_.size());
  if (dim_ == 2) {
    std::vector<int> next(nv, -1), prev(nv, -1);
    for (const auto& f : facets_) {
      if (next[f[0]] != -1 || prev[f[1]] != -1)
        throw ValidationError("polygon: edges do not form a simple cycle");
      next[f[0]] = f[1];
      prev[f[1]] = f[0];
    }
    if (static_cast<int>(facets_.size()) != nv)
      throw ValidationError("polygon: edge count must equal vertex count");
    int cur = 0, steps = 0;
    do {
      cur = next[cur];
      if (cur < 0) throw ValidationError("polygon: open edge chain");
      ++steps;
    } while (cur != 0 && steps <= nv);
    if (steps != nv) throw ValidationError("polygon: edges form more than one cycle");
    return;
  }
  if (dim_ == 3) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& f : facets_)
      for (std::size_t k = 0; k < f.size(); ++k)
        ++directed[{f[k], f[(k + 1) % f.size()]}];
    for (const auto& [edge, count] : directed) {
      if (count != 1)
        throw ValidationError("polytope: directed edge used twice (inconsistent orientation)");
      auto it = directed.find({edge.second, edge.first});
      if (it == directed.end())
        throw ValidationError("polytope: surface is not closed");
    }
  } else {
    std::map<std::vector<int>, int> ridges;
    for (const auto& f : facets_) {
      for (std::size_t skip = 0; skip < f.size(); ++skip) {
        std::vector<int> r;
        for (std::size_t k = 0; k < f.size(); ++k)
          if (k != skip) r.push_back(f[k]);
        std::sort(r.begin(), r.end());
        ++ridges[r];
      }
    }
    for (const auto& [r, count] : ridges)
      if (count != 2) throw ValidationError("polytope: boundary is not closed");
  }
  std::vector<int> incidence(nv, 0);
  for (const auto& f : facets_)
    for (int idx : f) ++incidence[idx];
  for (int i = 0; i < nv; ++i)
    if (incidence[i] < dim_)
      throw ValidationError("polytope: vertex " + std::to_string(i) +
                            " lies on fewer than n facets");
}

void Polytope::compute_facets() {
  const double tol = kGeometryTolerance * diameter_;
  facet_data_.clear();
  facet_data_.reserve(facets_.size());
  const Vec center = vertex_centroid();
  for (std::size_t k = 0; k < facets_.size(); ++k) {
    const auto& f = facets_[k];
    Facet fd;
    fd.vertices = f;
    fd.anchor = vertices_[f[0]];
    if (dim_ == 2) {
      const Vec e = vertices_[f[1]] - vertices_[f[0]];
      fd.area = e.norm();
      if (fd.area <= tol) throw ValidationError(facet_label(k) + " is degenerate");
      fd.normal = Vec(2);
      fd.normal << e(1), -e(0);
      fd.normal /= fd.area;
    } else if (dim_ == 3) {
      Eigen::Vector3d newell = Eigen::Vector3d::Zero();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const Eigen::Vector3d a = vertices_[f[i]];
        const Eigen::Vector3d b = vertices_[f[(i + 1) % f.size()]];
        newell += a.cross(b);
      }
      const double twice_area = newell.norm();
      fd.area = 0.5 * twice_area;
      if (fd.area <= tol * diameter_)
        throw ValidationError(facet_label(k) + " is degenerate");
      fd.normal = newell / twice_area;
    } else {
      Mat edges(dim_, dim_ - 1);
      for (int j = 1; j < dim_; ++j)
        edges.col(j - 1) = vertices_[f[j]] - vertices_[f[0]];
      Vec c = generalized_cross(edges);
      const double cn = c.norm();
      fd.area = cn / factorial(dim_ - 1);
      if (fd.area <= std::pow(tol, dim_ - 1))
        throw ValidationError(facet_label(k) + " is degenerate");
      fd.normal = c / cn;
      if (fd.normal.dot(center - fd.anchor) > 0) fd.normal = -fd.normal;
    }
    for (int idx : f) {
      if (std::abs(fd.normal.dot(vertices_[idx] - fd.anchor)) > tol)
        throw ValidationError(facet_label(k) + " is not planar");
    }
    facet_data_.push_back(std::move(fd));
  }
}

void Polytope::validate_convexity() const {
  const double tol = kGeometryTolerance * diameter_;
  for (std::size_t k = 0; k < facet_data_.size(); ++k) {
    const auto& fd = facet_data_[k];
    std::vector<bool> on_facet(vertices_.size(), false);
    for (int idx : fd.vertices) on_facet[idx] = true;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (on_facet[i]) continue;
      const double h = fd.normal.dot(vertices_[i] - fd.anchor);
      if (h > tol)
        throw ValidationError(facet_label(k) +
                              " does not support the polytope (wrong orientation "
                              "or non-convex input)");
      if (h > -tol)
        throw ValidationError("vertex " + std::to_string(i) + " lies on the plane of " +
                              facet_label(k) + " but is not listed in it");
    }
  }
}

Polytope Polytope::translated(const Vec& offset) const {
  std::vector<Vec> vs = vertices_;
  for (auto& v : vs) v += offset;
  return Polytope(dim_, std::move(vs), facets_);
}

Polytope Polytope::reflected() const {
  std::vector<Vec> vs = vertices_;
  for (auto& v : vs) v = -v;
  auto fs = facets_;
  // x -> -x has determinant (-1)^n; odd n reverses orientation.
  if (dim_ % 2 == 1)
    for (auto& f : fs) std::reverse(f.begin(), f.end());
  return Polytope(dim_, std::move(vs), std::move(fs));
}

Polytope Polytope::scaled(double factor) const {
  if (!(factor > 0.0)) throw ValidationError("polytope: scale factor must be positive");
  std::vector<Vec> vs = vertices_;
  for (auto& v : vs) v *= factor;
  return Polytope(dim_, std::move(vs), facets_);
}

// ------------------------------------------------------------- operations

const std::vector<Facet>& facet_data(const Polytope& polytope) {
  return polytope.facet_data();
}

std::vector<Simplex> triangulate(const Polytope& p) {
  const int n = p.dim();
  const auto& vs = p.vertices();
  if (static_cast<int>(vs.size()) == n + 1) return {Simplex(vs)};

  std::vector<Simplex> out;
  if (n == 2) {
    std::vector<int> next(vs.size());
    for (const auto& f : p.facets()) next[f[0]] = f[1];
    int a = next[0];
    for (int b = next[a]; b != 0; a = b, b = next[b])
      out.emplace_back(std::vector<Vec>{vs[0], vs[a], vs[b]});
    return out;
  }
  const Vec apex = p.vertex_centroid();
  for (const auto& f : p.facets()) {
    if (n == 3) {
      for (std::size_t k = 1; k + 1 < f.size(); ++k)
        out.emplace_back(std::vector<Vec>{apex, vs[f[0]], vs[f[k]], vs[f[k + 1]]});
    } else {
      std::vector<Vec> cell{apex};
      for (int idx : f) cell.push_back(vs[idx]);
      out.emplace_back(std::move(cell));
    }
  }
  return out;
}

double volume(const Polytope& p) {
  double v = 0.0;
  for (const auto& s : triangulate(p)) v += s.volume();
  return v;
}

Vec centroid(const Polytope& p) {
  Vec c = Vec::Zero(p.dim());
  double total = 0.0;
  for (const auto& s : triangulate(p)) {
    Vec mid = Vec::Zero(p.dim());
    for (const auto& v : s.vertices()) mid += v;
    mid /= static_cast<double>(s.vertices().size());
    const double w = s.volume();
    c += w * mid;
    total += w;
  }
  return c / total;
}

bool is_facet_generic(const Polytope& p) {
  const auto& fd = p.facet_data();
  for (std::size_t i = 0; i < fd.size(); ++i)
    for (std::size_t j = i + 1; j < fd.size(); ++j)
      if (std::abs(fd[i].normal.dot(fd[j].normal)) > 1.0 - 1e-9) return false;
  return true;
}

}  // namespace polyrecon
