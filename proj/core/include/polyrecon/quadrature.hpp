#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "polyrecon/geometry.hpp"

namespace polyrecon {

/// Grundmann-Moeller rule pair of degrees 2s+1 and 2s-1 on the unit simplex
/// {y >= 0, sum y <= 1}. The lower rule reuses the nodes of the higher one.
class GrundmannMoellerRule {
public:
  GrundmannMoellerRule(int dim, int s);

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return 2 * s_ + 1; }
  std::size_t size() const noexcept { return level_.size(); }
  /// Node k, row-major (size() x dim()).
  const std::vector<double>& nodes() const noexcept { return nodes_; }

  /// Applies both rules to values f(node_k); returns {high, low}.
  template <class T>
  std::pair<T, T> apply(const std::vector<T>& values) const {
    std::vector<T> level_sum(s_ + 1, T{});
    for (std::size_t k = 0; k < values.size(); ++k) level_sum[level_[k]] += values[k];
    T hi{}, lo{};
    for (int i = 0; i <= s_; ++i) hi += high_weight_[i] * level_sum[i];
    for (int i = 1; i <= s_; ++i) lo += low_weight_[i] * level_sum[i];
    return {hi, lo};
  }

private:
  int dim_;
  int s_;
  std::vector<double> nodes_;
  std::vector<int> level_;
  std::vector<double> high_weight_;
  std::vector<double> low_weight_;
};

enum class QuadratureMethod {
  /// Slabs orthogonal to s: exact slice measures of the simplex times an
  /// adaptive Gauss-Kronrod rule along the phase axis. Cost grows linearly
  /// with |s| * diameter.
  phase_slabs,
  /// Recursive bisection of simplex cells with the Grundmann-Moeller pair.
  /// Cost grows roughly like (|s| * diameter)^(n-1).
  simplex_bisection,
};

struct QuadratureOptions {
  QuadratureMethod method = QuadratureMethod::phase_slabs;
  int max_depth = 60;
  std::size_t max_cells = 20'000'000;
  int rule_parameter = 6;  // Grundmann-Moeller degree 13 / 11 pair
};

/// Measure of the slice {x in S : u.x = t} for a unit vector u.
double simplex_slice_measure(const Simplex& simplex, const Vec& unit, double t);

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t cells = 0;
};

/// \int_S e^{-i s.x} dx by adaptive subdivision to an absolute error estimate
/// of at most tol * vol(S). Independent of the closed forms in fourier.hpp.
/// Throws ConvergenceError (carrying the achieved absolute error estimate)
/// when the depth or cell budget runs out. Requires n <= 4, tol >= 1e-10.
QuadratureResult ft_simplex_quadrature(const Simplex& simplex, const Vec& s,
                                       double tol,
                                       const QuadratureOptions& options = {});

/// Sum of ft_simplex_quadrature over triangulate(P).
QuadratureResult ft_quadrature(const Polytope& polytope, const Vec& s,
                               double tol,
                               const QuadratureOptions& options = {});

}  // namespace polyrecon
