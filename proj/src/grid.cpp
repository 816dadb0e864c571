#include "parisi/grid.hpp"

#include <algorithm>
#include <cmath>

#include "parisi/errors.hpp"

namespace parisi {

int GridSpec::points() const {
  return 2 * static_cast<int>(std::lround(half_width / spacing)) + 1;
}

GridSpec GridSpec::for_model(const Mixture& mix, double gamma) {
  GridSpec g;
  const double sigma = std::sqrt(std::max(0.0, gamma) * mix.xi_prime(1.0));
  g.half_width = std::max(8.0 + 4.0 * sigma, 6.0 * sigma);
  g.spacing = g.half_width / 1024.0;
  g.quad_nodes = 64;
  return g;
}

void GridSpec::validate() const {
  if (!(half_width >= 8.0)) throw InvalidParameter("pde_core: grid half-width below 8");
  if (!(spacing > 0.0)) throw InvalidParameter("pde_core: non-positive grid spacing");
  const double ratio = half_width / spacing;
  if (std::fabs(ratio - std::lround(ratio)) > 1e-9 * ratio)
    throw InvalidParameter("pde_core: half-width must be an integer multiple of spacing");
  if (quad_nodes < 8 || quad_nodes % 2 != 0)
    throw InvalidParameter("pde_core: quadrature order must be even and >= 8");
}

Eigen::ArrayXd GridSpec::points_array() const {
  const int n = points();
  Eigen::ArrayXd xs(n);
  for (int i = 0; i < n; ++i) xs[i] = x(i);
  return xs;
}

CubicStencil cubic_stencil(double c, int n_points) {
  int j = static_cast<int>(std::floor(c));
  j = std::clamp(j, 1, n_points - 3);
  const double t = c - j;
  CubicStencil s;
  s.base = j - 1;
  // Lagrange basis on offsets {-1, 0, 1, 2} evaluated at t.
  s.w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
  s.w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  s.w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
  s.w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
  return s;
}

double interp_cubic(const Eigen::ArrayXd& f, const GridSpec& g, double x) {
  const double c = (x + g.half_width) / g.spacing;
  const CubicStencil s = cubic_stencil(c, static_cast<int>(f.size()));
  return s.w[0] * f[s.base] + s.w[1] * f[s.base + 1] + s.w[2] * f[s.base + 2] +
         s.w[3] * f[s.base + 3];
}

}  // namespace parisi
