#include "parisi/functional.hpp"

#include <cmath>

namespace parisi {

namespace {

double dgamma_phi_formula(const Mixture& mix, const OrderParameter& op,
                          const TiltedValues& eu2) {
  // (1/2) ( xi'(1) - int xi' E u^2 d(alpha) ); d(alpha) is atomic, and the
  // atoms sit at levels 1..k of the cascade.
  double acc = mix.xi_prime(1.0);
  for (int l = 0; l < op.k(); ++l)
    acc -= op.mass(l) * mix.xi_prime(op.atom(l)) * eu2.eu2[static_cast<std::size_t>(l + 1)];
  return 0.5 * acc;
}

}  // namespace

Evaluation evaluate(const Mixture& mix, const OrderParameter& op, double gamma,
                    const GridSpec& grid) {
  const LevelSolution sol = solve_cascade(mix, op, gamma, grid);
  Evaluation ev;
  ev.gamma = gamma;
  ev.grid = grid;
  ev.moments = alpha_moments(op, mix);
  ev.phi00 = sol.phi00();
  ev.p_hat = M_LN2 + ev.phi00 - 0.5 * gamma * ev.moments.int_alpha_s_xi2;
  ev.eu2 = expected_u_squared(sol);
  ev.dgamma_phi = dgamma_phi_formula(mix, op, ev.eu2);
  ev.dgamma_p = ev.dgamma_phi - 0.5 * ev.moments.int_alpha_s_xi2;
  return ev;
}

Evaluation evaluate(const Mixture& mix, const OrderParameter& op, double gamma) {
  return evaluate(mix, op, gamma, GridSpec::for_model(mix, gamma));
}

double p_hat_value(const Mixture& mix, const OrderParameter& op, double gamma,
                   const GridSpec& grid) {
  const LevelSolution sol = solve_cascade(mix, op, gamma, grid);
  return M_LN2 + sol.phi00() - 0.5 * gamma * alpha_moments(op, mix).int_alpha_s_xi2;
}

double dgamma_p_alternate(const Mixture& mix, const OrderParameter& op,
                          const TiltedValues& eu2) {
  const AlphaMoments mo = alpha_moments(op, mix);
  double acc = mo.int_alpha_xi_prime;
  for (int l = 0; l < op.k(); ++l) {
    const double q = op.atom(l);
    acc -= op.mass(l) * mix.xi_prime(q) * (eu2.eu2[static_cast<std::size_t>(l + 1)] - q);
  }
  return 0.5 * acc;
}

std::vector<double> stationarity_residual(const Evaluation& ev, const OrderParameter& op) {
  std::vector<double> res(static_cast<std::size_t>(op.k()));
  for (int l = 0; l < op.k(); ++l)
    res[static_cast<std::size_t>(l)] =
        ev.eu2.eu2[static_cast<std::size_t>(l + 1)] - op.atom(l);
  return res;
}

std::vector<double> stationarity_residual(const Mixture& mix, const OrderParameter& op,
                                          double gamma, const GridSpec& grid) {
  return stationarity_residual(evaluate(mix, op, gamma, grid), op);
}

}  // namespace parisi
