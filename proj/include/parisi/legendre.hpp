#pragma once

#include <map>
#include <string>
#include <vector>

#include "parisi/parisi_min.hpp"

namespace parisi {

/// gamma* maximizing the concave map gamma -> p_hat(alpha,gamma) -
/// (gamma/2) int alpha xi' ds, found by bisection on its derivative.
struct LegendreResult {
  enum class Kind { finite, flat, divergent };
  Kind kind = Kind::finite;
  double value = 0;          // Gamma_hat(alpha); +infinity when divergent
  double argmax_lo = 0;      // finite: argmax_lo == argmax_hi == gamma*
  double argmax_hi = 0;      // flat: the probed maximizer interval
  double slope_at_argmax = 0;
  int evaluations = 0;
};

struct GammaHatOptions {
  double gamma_lo = 1e-8;
  double gamma_max = 1e6;   // divergence threshold for the derivative-sign test
  double slope_tol = 1e-7;  // first-order-condition certificate
  double flat_tol = 1e-9;
  int max_bisect = 200;
};

LegendreResult gamma_hat(const Mixture& mix, const OrderParameter& op,
                         const GammaHatOptions& opts = {});

/// Memoized minimized curve gamma -> P_hat(gamma) with warm-started
/// refinement; new evaluations reuse the nearest cached minimizer.
class PhatCurve {
 public:
  PhatCurve(Mixture mix, int k, MinimizeOptions opts = {});

  const ParisiMeasure& at(double gamma);
  const Mixture& mix() const { return mix_; }
  int k() const { return k_; }

  struct SupResult {
    double gamma_star = 0;
    double value = 0;
    int evaluations = 0;
  };
  /// sup over [lo, hi] of P_hat(gamma) - (gamma/2) * c, by coarse scan plus
  /// golden-section refinement (the objective is concave).
  SupResult sup_linear_offset(double c, double lo, double hi, int coarse = 9);

 private:
  Mixture mix_;
  int k_;
  MinimizeOptions opts_;
  std::map<double, ParisiMeasure> cache_;
};

struct DualityCheck {
  std::string label;
  double lhs = 0;
  double rhs = 0;
  double residual = 0;
  bool pass = false;
};

struct ForwardDualityReport {
  double gamma = 0;
  double p_hat_min = 0;          // P_hat(gamma) from the minimizer
  double gamma_hat_value = 0;    // Gamma_hat(alpha_P)
  double reconstruction = 0;     // Gamma_hat + (gamma/2) int alpha_P xi'
  double residual = 0;
  std::vector<DualityCheck> panel;  // Fenchel inequality on non-optimal alphas
  bool pass = false;
};

ForwardDualityReport duality_forward(const Mixture& mix, double gamma, int k,
                                     double tol = 1e-4, const MinimizeOptions& opts = {});

struct InverseDualityReport {
  double claimed_gamma = 0;
  double gamma_hat_value = 0;  // Gamma_hat(alpha) via the functional transform
  double sup_value = 0;        // sup_gamma (P_hat(gamma) - (gamma/2) int alpha xi')
  double sup_gamma = 0;
  double residual = 0;
  bool pass = false;
};

/// Inverse direction of the duality; throws NotAParisiMeasure when op fails
/// stationarity or sits measurably above the minimized value at
/// claimed_gamma.
InverseDualityReport duality_inverse(const Mixture& mix, const OrderParameter& op,
                                     double claimed_gamma, int k, double tol = 1e-4,
                                     const MinimizeOptions& opts = {});
InverseDualityReport duality_inverse(PhatCurve& curve, const OrderParameter& op,
                                     double claimed_gamma, double tol = 1e-4);

struct LhatResult {
  bool infinite = false;
  double value = 0;
  double sup_gamma = 0;
};

/// The coarser transform over the minimized curve itself,
/// sup_gamma (P_hat(gamma) - (gamma/2) int alpha xi'); infinite when alpha
/// vanishes on [0,1).
LhatResult l_hat(PhatCurve& curve, const OrderParameter& op, double gamma_hint);

struct NonUniquenessDemo {
  OrderParameter alpha0;  // single-atom witness
  OrderParameter alpha1;  // two-atom witness, same int alpha xi'
  double target_coupling = 0;  // the shared int alpha xi'
  double residual0 = 0;        // |L_hat + (gamma/2) c - P_hat(gamma)|
  double residual1 = 0;
  bool pass = false;
};

/// Construct two distinct order parameters matching the minimizer's
/// int alpha xi' at gamma and verify both reach the duality infimum.
NonUniquenessDemo demo_lhat_non_uniqueness(PhatCurve& curve, double gamma, double tol = 1e-4);

/// Max centered second difference of Phi(0,0) over an increasing gamma grid
/// (concavity certificate: pass iff <= 1e-8). The grid spec is pinned to the
/// largest gamma so the sweep shares one discretization.
double concavity_certificate(const Mixture& mix, const OrderParameter& op,
                             const std::vector<double>& gamma_grid);

/// Min centered second difference of Phi(0,0) along a uniform beta grid
/// (convexity contrast in the unsquared temperature).
double beta_convexity_certificate(const Mixture& mix, const OrderParameter& op,
                                  const std::vector<double>& beta_grid);

}  // namespace parisi
