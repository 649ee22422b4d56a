#include "polyrecon/fourier.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "polyrecon/errors.hpp"

namespace polyrecon {

namespace {

constexpr Complex kI{0.0, 1.0};

// Truncation order of the series used below |s| * diameter < 1; terms decay
// like 1/k!, so 24 terms reach machine precision.
constexpr int kSeriesOrder = 24;
constexpr double kSeriesRadius = 1.0;

// h_0..h_K of the given values (complete homogeneous symmetric polynomials).
std::array<double, kSeriesOrder + 1> homogeneous_sums(const double* values,
                                                      std::size_t count) {
  std::array<double, kSeriesOrder + 1> h{};
  h[0] = 1.0;
  for (std::size_t j = 0; j < count; ++j)
    for (int k = 1; k <= kSeriesOrder; ++k) h[k] += values[j] * h[k - 1];
  return h;
}

// sum_k (-i)^k h_k / (k + n)!, the normalized series of \int_simplex e^{-i l}.
Complex exp_series(const double* values, std::size_t count) {
  const int n = static_cast<int>(count) - 1;
  const auto h = homogeneous_sums(values, count);
  Complex acc = 0.0;
  Complex unit = 1.0;
  double fact = factorial(n);
  for (int k = 0; k <= kSeriesOrder; ++k) {
    if (k > 0) {
      unit *= -kI;
      fact *= (k + n);
    }
    acc += unit * (h[k] / fact);
  }
  return acc;
}

}  // namespace

Complex expi_neg(double x) {
  if (std::abs(x) > 1e8) x = std::fmod(x, 2.0 * std::numbers::pi);
  return {std::cos(x), -std::sin(x)};
}

Complex phase_quotient(double z) {
  if (std::abs(z) < 1e-4) {
    // degree-8 Taylor polynomial of sum_{k>=1} (-i)^k z^{k-1} / k!
    Complex acc = 0.0;
    Complex term = -kI;  // k = 1
    for (int k = 1; k <= 9; ++k) {
      acc += term;
      term *= -kI * z / static_cast<double>(k + 1);
    }
    return acc;
  }
  const double half = std::sin(0.5 * z);
  return {-2.0 * half * half / z, -std::sin(z) / z};
}

double simplex_linear_moment(const std::vector<double>& vertex_values, int k,
                             double simplex_volume) {
  if (k < 0) throw ValidationError("moment order must be >= 0");
  const int n = static_cast<int>(vertex_values.size()) - 1;
  std::vector<double> h(k + 1, 0.0);
  h[0] = 1.0;
  for (double x : vertex_values)
    for (int j = 1; j <= k; ++j) h[j] += x * h[j - 1];
  // n! k! / (k+n)! = 1 / binom(k+n, n)
  double binom = 1.0;
  for (int j = 1; j <= n; ++j) binom = binom * (k + j) / j;
  return simplex_volume * h[k] / binom;
}

// ------------------------------------------------------ TransformEvaluator

TransformEvaluator::TransformEvaluator(const Polytope& p)
    : dim_(p.dim()), volume_(volume(p)), diameter_(p.diameter()),
      center_(p.vertex_centroid()) {
  if (dim_ != 2 && dim_ != 3)
    throw ValidationError("closed-form transforms exist for n = 2 and n = 3 only");
  const auto& vs = p.vertices();
  for (const auto& s : triangulate(p)) cells_.push_back({s.vertices(), s.volume()});

  if (dim_ == 2) {
    for (const auto& f : p.facets()) {
      const Eigen::Vector2d a = vs[f[0]], b = vs[f[1]];
      edges2_.push_back({a, b - a});
    }
    return;
  }
  for (const auto& fd : p.facet_data()) {
    Face3 face;
    face.normal = fd.normal;
    face.anchor = fd.anchor;
    face.diameter = 0.0;
    const auto& idx = fd.vertices;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Eigen::Vector3d a = vs[idx[k]];
      const Eigen::Vector3d b = vs[idx[(k + 1) % idx.size()]];
      face.edges.push_back({a, b - a});
      for (std::size_t j = k + 1; j < idx.size(); ++j)
        face.diameter = std::max(face.diameter, (vs[idx[k]] - vs[idx[j]]).norm());
    }
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
      const Eigen::Vector3d a = vs[idx[0]], b = vs[idx[k]], c = vs[idx[k + 1]];
      face.fan.push_back({a, b, c, 0.5 * (b - a).cross(c - a).norm()});
    }
    faces3_.push_back(std::move(face));
  }
}

Complex TransformEvaluator::small_frequency(const Vec& s) const {
  Complex acc = 0.0;
  std::vector<double> values;
  for (const auto& cell : cells_) {
    values.clear();
    for (const auto& v : cell.vertices) values.push_back(s.dot(v - center_));
    acc += cell.volume * factorial(dim_) * exp_series(values.data(), values.size());
  }
  return expi_neg(s.dot(center_)) * acc;
}

Complex TransformEvaluator::face_integral(const Face3& face,
                                          const Eigen::Vector3d& s,
                                          const Eigen::Vector3d& tangential) const {
  const double t2 = tangential.squaredNorm();
  if (std::sqrt(t2) * face.diameter < kSeriesRadius) {
    Complex acc = 0.0;
    for (const auto& tri : face.fan) {
      const double values[3] = {s.dot(tri.a - face.anchor), s.dot(tri.b - face.anchor),
                                s.dot(tri.c - face.anchor)};
      acc += 2.0 * tri.area * exp_series(values, 3);
    }
    return expi_neg(s.dot(face.anchor)) * acc;
  }
  const Eigen::Vector3d ns = face.normal.cross(s);
  Complex sum = 0.0;
  for (const auto& e : face.edges)
    sum += ns.dot(e.vec) * expi_neg(s.dot(e.start)) * phase_quotient(s.dot(e.vec));
  return -sum / t2;
}

Complex TransformEvaluator::evaluate2(const Eigen::Vector2d& s) const {
  const double s2 = s.squaredNorm();
  if (s2 == 0.0) return volume_;
  if (std::sqrt(s2) * diameter_ < kSeriesRadius) return small_frequency(Vec(s));
  const Eigen::Vector2d perp(-s.y(), s.x());
  Complex sum = 0.0;
  for (const auto& e : edges2_)
    sum += perp.dot(e.vec) * expi_neg(s.dot(e.start)) * phase_quotient(s.dot(e.vec));
  return -sum / s2;
}

Complex TransformEvaluator::evaluate3(const Eigen::Vector3d& s) const {
  const double s2 = s.squaredNorm();
  if (s2 == 0.0) return volume_;
  if (std::sqrt(s2) * diameter_ < kSeriesRadius) return small_frequency(Vec(s));
  Complex total = 0.0;
  for (const auto& face : faces3_) {
    const double sn = s.dot(face.normal);
    if (sn == 0.0) continue;
    const Eigen::Vector3d tangential = s - sn * face.normal;
    total += sn * face_integral(face, s, tangential);
  }
  return kI * total / s2;
}

Complex TransformEvaluator::operator()(const Vec& s) const {
  if (s.size() != dim_) throw ValidationError("wavevector dimension mismatch");
  if (!s.allFinite()) throw ValidationError("wavevector is not finite");
  if (dim_ == 2) return evaluate2(Eigen::Vector2d(s));
  return evaluate3(Eigen::Vector3d(s));
}

// -------------------------------------------------------------- free API

Complex ft_polygon_2d(const Polytope& polygon, const Vec& s) {
  if (polygon.dim() != 2) throw ValidationError("ft_polygon_2d: polygon must be 2D");
  return TransformEvaluator(polygon)(s);
}

Complex ft_polytope_3d(const Polytope& polytope, const Vec& s) {
  if (polytope.dim() != 3) throw ValidationError("ft_polytope_3d: polytope must be 3D");
  return TransformEvaluator(polytope)(s);
}

Complex ft_polytope(const Polytope& polytope, const Vec& s) {
  return TransformEvaluator(polytope)(s);
}

Complex ft_wavelength(const Polytope& polytope, const Vec& s, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("wavelength must be positive");
  return ft_polytope(polytope, s / lambda);
}

Complex integral_Inc(int n, double c, double lambda) {
  if (n < 0) throw ValidationError("integral_Inc: n must be >= 0");
  if (c == 0.0) throw ValidationError("integral_Inc: c must be nonzero");
  if (!(lambda > 0.0)) throw ValidationError("integral_Inc: lambda must be positive");
  const Complex factor = kI / c * lambda;
  Complex value = factor * (expi_neg(c / lambda) - 1.0);
  for (int k = 1; k <= n; ++k) value = -factor * (1.0 - static_cast<double>(k) * value);
  return value;
}

Complex asymptotic_leading_term(const Polytope& p, const Vec& s, double lambda) {
  if (s.size() != p.dim()) throw ValidationError("wavevector dimension mismatch");
  const double norm = s.norm();
  if (norm == 0.0) throw ValidationError("asymptotic term needs s != 0");
  if (!(lambda > 0.0)) throw ValidationError("wavelength must be positive");
  const Vec unit = s / norm;
  Complex sum = 0.0;
  for (const auto& fd : p.facet_data()) {
    const double c = unit.dot(fd.normal);
    if (std::abs(1.0 - std::abs(c)) > 1e-9) continue;
    const double sign = s.dot(fd.normal) > 0 ? 1.0 : -1.0;
    sum += sign * fd.area * expi_neg(s.dot(fd.anchor) / lambda);
  }
  return kI / norm * sum * lambda;
}

}  // namespace polyrecon
