#pragma once

#include <map>
#include <vector>

namespace parisi {

/// Mixture function xi(t) = sum_{p>=2} c_p^2 t^p of a mixed p-spin model,
/// together with its first two derivatives. Immutable after construction.
class Mixture {
 public:
  static constexpr int kMaxP = 64;

  /// coeffs[i] holds c_{i+2}; the sequence starts at p = 2.
  explicit Mixture(std::vector<double> coeffs);

  /// Build from a sparse {p: c_p} map (gaps are zero coefficients).
  static Mixture from_map(const std::map<int, double>& coeffs);

  /// Build from the squared coefficients c_p^2 (index 0 is p = 2). Keeps
  /// round numbers like 1/2 exact where c_p itself is irrational.
  static Mixture from_squared(std::vector<double> squared);

  /// SK normalization: xi(t) = t^2/2 exactly.
  static Mixture sk();

  double xi(double t) const;         // sum c_p^2 t^p
  double xi_prime(double t) const;   // sum p c_p^2 t^{p-1}
  double xi_second(double t) const;  // sum p(p-1) c_p^2 t^{p-2}

  /// Antiderivative of s*xi''(s): t*xi'(t) - xi(t). Used for closed-form
  /// integrals of step functions against s*xi''(s)ds.
  double s_xi_second_antiderivative(double t) const;

  /// Inverse of xi' on [0,1]; requires 0 <= v <= xi'(1).
  double xi_prime_inverse(double v) const;

  int max_p() const { return 2 + static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  std::vector<double> coeffs_;   // c_p, p = 2..max_p
  std::vector<double> squared_;  // c_p^2
};

}  // namespace parisi
