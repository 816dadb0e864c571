#pragma once

#include <Eigen/Core>

namespace parisi {

/// Gauss-Hermite rule (weight e^{-y^2}), stored with weights normalized to
/// sum to one so that E f(Z) ~= sum_i w_i f(sqrt(2) sigma y_i) for
/// Z ~ N(0, sigma^2). Nodes are exactly antisymmetric: y_i = -y_{n-1-i}.
struct GaussHermite {
  Eigen::ArrayXd nodes;    // ascending
  Eigen::ArrayXd weights;  // positive, sum == 1
};

/// Cached rule for a given (even) node count. Thread-safe.
const GaussHermite& gauss_hermite(int n);

}  // namespace parisi
