#include "parisi/gauss_hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

#include "parisi/errors.hpp"

namespace parisi {

namespace {

GaussHermite build(int n) {
  // Golub-Welsch: eigen-decompose the Jacobi matrix of the Hermite
  // recurrence (zero diagonal, off-diagonal sqrt(j/2)).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    const double b = std::sqrt(0.5 * j);
    jacobi(j, j - 1) = b;
    jacobi(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermite gh;
  gh.nodes = es.eigenvalues().array();
  gh.weights = es.eigenvectors().row(0).array().square();

  // Enforce exact antisymmetry of nodes and symmetry of weights, then
  // normalize; n is even so there is no center node.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double y = 0.5 * (gh.nodes[j] - gh.nodes[i]);
    gh.nodes[i] = -y;
    gh.nodes[j] = y;
    const double w = 0.5 * (gh.weights[i] + gh.weights[j]);
    gh.weights[i] = w;
    gh.weights[j] = w;
  }
  gh.weights /= gh.weights.sum();
  return gh;
}

}  // namespace

const GaussHermite& gauss_hermite(int n) {
  if (n < 8 || n % 2 != 0)
    throw InvalidParameter("pde_core: quadrature order must be even and >= 8");
  static std::mutex mu;
  static std::map<int, GaussHermite> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build(n)).first;
  return it->second;
}

}  // namespace parisi
