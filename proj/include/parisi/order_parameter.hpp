#pragma once

#include <vector>

#include "parisi/mixture.hpp"

namespace parisi {

/// Finite-step order parameter: a right-continuous nondecreasing step
/// function alpha on [0,1] with alpha(1) = 1, stored through the atoms of
/// the induced measure d(alpha). Construction validates monotonicity,
/// merges duplicate atom positions and drops zero-mass atoms, so two
/// inputs describing the same function compare equal afterwards.
///
/// With k atoms at positions q_1 <= ... <= q_k and cumulative masses
/// m_1 <= ... <= m_k = 1, alpha(s) = m_l on [q_l, q_{l+1}) with the
/// conventions q_0 = 0, q_{k+1} = 1, m_0 = 0.
class OrderParameter {
 public:
  /// Spec-level constructor: k levels, q of length k, free masses m of
  /// length max(k-1, 0) (m_0 = 0 and m_k = 1 are implicit). k = 0 denotes
  /// alpha == 1, canonically stored as a unit atom at 0.
  OrderParameter(int k, std::vector<double> q, std::vector<double> m);

  static OrderParameter replica_symmetric();  // alpha == 1, d(alpha) = delta_0
  static OrderParameter dirac_at_one();       // alpha = 0 on [0,1)

  /// Single atom of mass one at q.
  static OrderParameter single_atom(double q);

  /// Build directly from atoms (positions, cumulative masses ending at 1).
  static OrderParameter from_atoms(std::vector<double> positions,
                                   std::vector<double> cumulative);

  int k() const { return static_cast<int>(positions_.size()); }
  double atom(int l) const { return positions_[static_cast<std::size_t>(l)]; }      // l in [0,k)
  double cumulative(int l) const { return cumulative_[static_cast<std::size_t>(l)]; }
  double mass(int l) const;

  const std::vector<double>& atoms() const { return positions_; }
  const std::vector<double>& cumulatives() const { return cumulative_; }

  /// Right-continuous evaluation; alpha(1) = 1.
  double alpha(double s) const;

  /// Level decomposition used by the cascade: boundaries q_0=0 <= q_1 <= ...
  /// <= q_{k+1}=1 and alpha-values m_0=0, m_1, ..., m_k on the stretches.
  std::vector<double> level_boundaries() const;
  std::vector<double> level_values() const;

  bool is_replica_symmetric() const { return k() == 1 && positions_[0] == 0.0; }

  bool operator==(const OrderParameter& other) const {
    return positions_ == other.positions_ && cumulative_ == other.cumulative_;
  }

 private:
  OrderParameter() = default;
  void normalize();

  std::vector<double> positions_;   // q_1..q_k
  std::vector<double> cumulative_;  // m_1..m_k, back() == 1
};

/// The alpha-integrals the functional needs, all in closed form (alpha is a
/// step function and the integrands are polynomials).
struct AlphaMoments {
  double int_alpha_xi_prime = 0;     // int_0^1 alpha(s) xi'(s) ds
  double int_alpha_s_xi2 = 0;        // int_0^1 alpha(s) s xi''(s) ds
  double int_xi_dalpha = 0;          // int_0^1 xi d(alpha)
  double int_s_xiprime_dalpha = 0;   // int_0^1 s xi'(s) d(alpha)
};

AlphaMoments alpha_moments(const OrderParameter& op, const Mixture& mix);

/// Pointwise convex combination (1-t)*a + t*b on the union of atom sets.
OrderParameter blend(const OrderParameter& a, const OrderParameter& b, double t);

}  // namespace parisi
