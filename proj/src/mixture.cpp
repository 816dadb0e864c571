#include "parisi/mixture.hpp"

#include <cmath>

#include "parisi/errors.hpp"

namespace parisi {

Mixture::Mixture(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidMixture("model: empty coefficient sequence");
  if (2 + static_cast<int>(coeffs_.size()) - 1 > kMaxP)
    throw InvalidMixture("model: mixture degree exceeds p = 64");
  bool any_nonzero = false;
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidMixture("model: non-finite coefficient");
    if (c != 0.0) any_nonzero = true;
  }
  if (!any_nonzero) throw InvalidMixture("model: all coefficients are zero");
  squared_.resize(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) squared_[i] = coeffs_[i] * coeffs_[i];
}

Mixture Mixture::from_map(const std::map<int, double>& coeffs) {
  if (coeffs.empty()) throw InvalidMixture("model: empty coefficient map");
  int pmax = coeffs.rbegin()->first;
  if (coeffs.begin()->first < 2) throw InvalidMixture("model: coefficients start at p = 2");
  if (pmax > kMaxP) throw InvalidMixture("model: mixture degree exceeds p = 64");
  std::vector<double> c(static_cast<std::size_t>(pmax - 1), 0.0);
  for (const auto& [p, v] : coeffs) c[static_cast<std::size_t>(p - 2)] = v;
  return Mixture(std::move(c));
}

Mixture Mixture::from_squared(std::vector<double> squared) {
  std::vector<double> c(squared.size());
  for (std::size_t i = 0; i < squared.size(); ++i) {
    if (!std::isfinite(squared[i]) || squared[i] < 0.0)
      throw InvalidMixture("model: squared coefficients must be finite and nonnegative");
    c[i] = std::sqrt(squared[i]);
  }
  Mixture mix(std::move(c));
  mix.squared_ = std::move(squared);
  return mix;
}

Mixture Mixture::sk() { return from_squared({0.5}); }

double Mixture::xi(double t) const {
  // Horner on sum c_p^2 t^p = t^2 * (c2^2 + c3^2 t + ...).
  double acc = 0.0;
  for (auto it = squared_.rbegin(); it != squared_.rend(); ++it) acc = acc * t + *it;
  return acc * t * t;
}

double Mixture::xi_prime(double t) const {
  double acc = 0.0;
  int p = max_p();
  for (auto it = squared_.rbegin(); it != squared_.rend(); ++it, --p) acc = acc * t + *it * p;
  return acc * t;
}

double Mixture::xi_second(double t) const {
  double acc = 0.0;
  int p = max_p();
  for (auto it = squared_.rbegin(); it != squared_.rend(); ++it, --p)
    acc = acc * t + *it * p * (p - 1);
  return acc;
}

double Mixture::s_xi_second_antiderivative(double t) const { return t * xi_prime(t) - xi(t); }

double Mixture::xi_prime_inverse(double v) const {
  double hi_val = xi_prime(1.0);
  if (v < -1e-15 || v > hi_val * (1.0 + 1e-12))
    throw InvalidParameter("model: xi' inverse argument out of range");
  if (v <= 0.0) return 0.0;
  if (v >= hi_val) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    (xi_prime(mid) < v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace parisi
