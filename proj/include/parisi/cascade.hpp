#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "parisi/grid.hpp"
#include "parisi/mixture.hpp"
#include "parisi/order_parameter.hpp"

namespace parisi {

/// Tilted Gaussian expectations E u(q_b)^2 at the level boundaries.
struct TiltedValues {
  std::vector<double> eu2;  // index b = 0..k+1
};

/// Backward-cascade solution of the Parisi PDE for an atomic order
/// parameter: Psi(q_l, .) and its x-derivative sampled on the grid at each
/// level boundary, plus the per-stretch tilt exponents and noise variances.
struct LevelSolution {
  Mixture mix;
  OrderParameter op;
  double gamma = 0;
  GridSpec grid;

  std::vector<double> q;  // level boundaries, size k+2: 0, atoms..., 1
  std::vector<double> m;  // alpha value on [q_l, q_{l+1}), size k+1; m[0] = 0
  std::vector<double> v;  // xi'(q_{l+1}) - xi'(q_l), size k+1

  std::vector<Eigen::ArrayXd> psi;   // size k+2, each grid.points() long
  std::vector<Eigen::ArrayXd> dpsi;  // same shape; |dpsi| <= 1

  int levels() const { return static_cast<int>(q.size()); }  // k+2
  double phi00() const { return psi[0][static_cast<std::size_t>(grid.mid())]; }

  /// Interpolated Psi(q_level, x) with linear slope-clamped tails; exact
  /// even/odd symmetry by evaluating at |x|.
  ValueSlope value_slope(int level, double x) const;

  LevelSolution(Mixture mx, OrderParameter o) : mix(std::move(mx)), op(std::move(o)) {}
};

/// Tilts below m_min are treated as a plain expectation; the Hopf-Cole
/// exponent (1/m) log E e^{mA} is catastrophically cancellative there.
inline constexpr double kTinyTilt = 1e-8;

/// One backward Hopf-Cole step across a stretch with tilt m and noise
/// variance `variance`: psi_out = (1/m) log E exp(m psi_next(x + sqrt(gamma) z)),
/// log-sum-exp stabilized, and dpsi propagated under the same tilted law.
void cascade_step(const GridSpec& g, double gamma, double m, double variance,
                  const Eigen::ArrayXd& psi_next, const Eigen::ArrayXd& dpsi_next,
                  Eigen::ArrayXd& psi_out, Eigen::ArrayXd& dpsi_out);

LevelSolution solve_cascade(const Mixture& mix, const OrderParameter& op, double gamma,
                            const GridSpec& grid);
LevelSolution solve_cascade(const Mixture& mix, const OrderParameter& op, double gamma);

ValueSlope phi_value(const LevelSolution& sol, int level, double x);

/// E[f(state at q_b)] under the cascade tilt, started from x = 0 at level 0,
/// computed by downward dynamic programming on the grid. f must be even and
/// bounded; its grid samples must be finite.
double tilted_expectation(const LevelSolution& sol, const std::function<double(double)>& f,
                          int b);

/// Same, starting from an already sampled integrand (constant beyond the grid).
double tilted_expectation_grid(const LevelSolution& sol, const Eigen::ArrayXd& f_samples,
                               int b);

/// E u(q_b)^2 for all b, i.e. the tilted expectation of dpsi(q_b, .)^2.
TiltedValues expected_u_squared(const LevelSolution& sol);

/// log cosh with large-|x| stability.
double log_cosh(double x);

}  // namespace parisi
