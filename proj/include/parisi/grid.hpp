#pragma once

#include <Eigen/Core>

#include "parisi/mixture.hpp"

namespace parisi {

/// Uniform symmetric x-grid [-L, L] with spacing h plus the Gauss-Hermite
/// node count used for every cascade step on it.
struct GridSpec {
  double half_width = 8.0;  // L
  double spacing = 8.0 / 1024.0;
  int quad_nodes = 64;

  int points() const;                  // 2*(L/h) + 1
  double x(int i) const { return -half_width + spacing * i; }
  int mid() const { return (points() - 1) / 2; }

  /// Default grid for a model at squared inverse temperature gamma:
  /// L = 8 + 4*sqrt(gamma*xi'(1)) widened to at least 6 total-noise sigmas,
  /// h = L/1024, 64 quadrature nodes.
  static GridSpec for_model(const Mixture& mix, double gamma);

  /// Throws unless L/h is an integer, L >= 8 and quad_nodes is even >= 8.
  void validate() const;

  Eigen::ArrayXd points_array() const;  // all x_i
};

struct ValueSlope {
  double value = 0;
  double slope = 0;
};

/// Local 4-point cubic Lagrange interpolation of samples f on the grid;
/// x must lie within [-L, L] (the stencil is clamped at the edges).
double interp_cubic(const Eigen::ArrayXd& f, const GridSpec& g, double x);

/// Weights and base index of the 4-point stencil for a continuous grid
/// coordinate c in [0, points-1]: f(x) ~= sum_r w[r] * f[base + r].
struct CubicStencil {
  int base;
  double w[4];
};
CubicStencil cubic_stencil(double c, int n_points);

}  // namespace parisi
