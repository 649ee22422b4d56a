#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "polyrecon/geometry.hpp"

namespace polyrecon {

using Complex = std::complex<double>;

/// e^{-i x}. Arguments beyond 1e8 in magnitude are reduced modulo 2*pi first.
Complex expi_neg(double x);

/// (e^{-iz} - 1) / z, continuous at z = 0 where it equals -i.
Complex phase_quotient(double z);

/// Integral of (s . x)^k over a simplex given the values s . v_j at its
/// vertices: n! vol k! / (k+n)! times the complete homogeneous symmetric
/// polynomial of degree k in those values.
double simplex_linear_moment(const std::vector<double>& vertex_values, int k,
                             double simplex_volume);

/// Closed-form F_P(s) = \int_P e^{-i s.x} dx for a polygon, summed over its
/// counterclockwise edges. s = 0 returns the area.
Complex ft_polygon_2d(const Polytope& polygon, const Vec& s);

/// Closed-form F_P(s) for a 3D polytope via the facet/edge double sum.
/// Directions nearly parallel to a facet normal switch that facet to a
/// series expansion of its surface integral.
Complex ft_polytope_3d(const Polytope& polytope, const Vec& s);

/// Dispatches on dimension (2 or 3).
Complex ft_polytope(const Polytope& polytope, const Vec& s);

/// phi_{P,s}(lambda) = F_P(s / lambda).
Complex ft_wavelength(const Polytope& polytope, const Vec& s, double lambda);

/// Precomputed edge/facet tables for repeated evaluation of F_P on one
/// polytope; used by the scan module. Immutable after construction.
class TransformEvaluator {
public:
  explicit TransformEvaluator(const Polytope& polytope);

  int dim() const noexcept { return dim_; }
  Complex operator()(const Vec& s) const;
  Complex evaluate2(const Eigen::Vector2d& s) const;
  Complex evaluate3(const Eigen::Vector3d& s) const;

private:
  struct Edge2 {
    Eigen::Vector2d start, vec;
  };
  struct Edge3 {
    Eigen::Vector3d start, vec;
  };
  struct Triangle3 {
    Eigen::Vector3d a, b, c;
    double area;
  };
  struct Face3 {
    Eigen::Vector3d normal, anchor;
    double diameter;
    std::vector<Edge3> edges;
    std::vector<Triangle3> fan;
  };
  struct Cell {
    std::vector<Vec> vertices;
    double volume;
  };

  Complex small_frequency(const Vec& s) const;
  Complex face_integral(const Face3& face, const Eigen::Vector3d& s,
                        const Eigen::Vector3d& tangential) const;

  int dim_;
  double volume_;
  double diameter_;
  Vec center_;
  std::vector<Edge2> edges2_;
  std::vector<Face3> faces3_;
  std::vector<Cell> cells_;
};

/// I_{n,c}(lambda) = \int_0^1 (1-x)^n e^{-i c x / lambda} dx by the
/// integration-by-parts recursion seeded with the closed form for n = 0.
Complex integral_Inc(int n, double c, double lambda);

/// First-order term of phi_{P,s}(lambda) as lambda -> 0:
/// (i/|s|) sum over facets orthogonal to s of sgn * A_F e^{-i s.p_F/lambda}
/// times lambda. A facet counts as orthogonal when |1 - |s^.n_F|| <= 1e-9.
Complex asymptotic_leading_term(const Polytope& polytope, const Vec& s,
                                double lambda);

}  // namespace polyrecon
