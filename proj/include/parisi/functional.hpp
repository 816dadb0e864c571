#pragma once

#include <vector>

#include "parisi/cascade.hpp"

namespace parisi {

/// Everything the reparametrized Parisi functional knows about one
/// (mixture, order parameter, gamma) triple.
struct Evaluation {
  double gamma = 0;
  double p_hat = 0;       // log 2 + Phi(0,0) - (gamma/2) int alpha(s) s xi''(s) ds
  double phi00 = 0;       // Psi(0,0)
  TiltedValues eu2;       // E u(q_b)^2, b = 0..k+1
  double dgamma_phi = 0;  // d/dgamma Psi(0,0) via the closed formula
  double dgamma_p = 0;    // dgamma_phi - int_alpha_s_xi2 / 2
  AlphaMoments moments;
  GridSpec grid;
};

Evaluation evaluate(const Mixture& mix, const OrderParameter& op, double gamma,
                    const GridSpec& grid);
Evaluation evaluate(const Mixture& mix, const OrderParameter& op, double gamma);

/// Fast path for optimizers: p_hat alone (no tilted expectations).
double p_hat_value(const Mixture& mix, const OrderParameter& op, double gamma,
                   const GridSpec& grid);

/// The equivalent derivative form
///   (1/2) ( int alpha xi' ds - int xi'(s) (E u(s)^2 - s) d(alpha) ),
/// which must agree with Evaluation::dgamma_p through the moment identity.
double dgamma_p_alternate(const Mixture& mix, const OrderParameter& op,
                          const TiltedValues& eu2);

/// Stationarity residuals E u(q_l)^2 - q_l at the atoms l = 1..k; all near
/// zero certifies a candidate Parisi measure (necessary, not sufficient).
std::vector<double> stationarity_residual(const Mixture& mix, const OrderParameter& op,
                                          double gamma, const GridSpec& grid);
std::vector<double> stationarity_residual(const Evaluation& ev, const OrderParameter& op);

}  // namespace parisi
