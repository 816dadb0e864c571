#pragma once

#include <functional>
#include <vector>

#include "parisi/mixture.hpp"
#include "parisi/order_parameter.hpp"

namespace parisi {

/// Validation-only brute-force routes. Everything here is independent of the
/// grid/interpolation solver: quadrature nodes come from a Newton iteration
/// on the Hermite recurrence and the recursions work pointwise, with no grid,
/// no interpolation and no dynamic programming. Used by the self-test suite
/// and the tests to cross-check the fast paths.
namespace oracle {

struct Quadrature {
  std::vector<double> nodes;    // ascending, antisymmetric
  std::vector<double> weights;  // normalized to sum 1
};

/// Gauss-Hermite nodes by Newton's method on H_n (physicists' weight).
Quadrature hermite_rule(int n);

/// Psi(q_level, x) by literal nested quadrature (cost n^(levels-1-level)).
double nested_psi(const Mixture& mix, const OrderParameter& op, double gamma, int level,
                  double x, int n = 32);

/// Phi(0,0) by the same recursion at the root.
double nested_phi0(const Mixture& mix, const OrderParameter& op, double gamma, int n = 32);

/// E[f(state at q_b)] under the cascade tilt from x at level 0, as a literal
/// tensor-product sum over all node combinations.
double nested_tilted(const Mixture& mix, const OrderParameter& op, double gamma,
                     const std::function<double(double)>& f, int b, double x = 0.0,
                     int n = 24);

/// Adaptive Simpson quadrature on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12);

/// E g(Z) for Z ~ N(0, variance), one-dimensional.
double gauss_expect(const std::function<double(double)>& g, double variance, int n = 200);

}  // namespace oracle
}  // namespace parisi
