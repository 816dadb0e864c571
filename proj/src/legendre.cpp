#include "parisi/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parisi/errors.hpp"

namespace parisi {

namespace {

struct ObjectiveSample {
  double value;  // J(gamma) = p_hat(alpha,gamma) - (gamma/2) c
  double slope;  // J'(gamma)
};

ObjectiveSample sample_objective(const Mixture& mix, const OrderParameter& op, double gamma,
                                 double coupling) {
  const Evaluation ev = evaluate(mix, op, gamma);
  return {ev.p_hat - 0.5 * gamma * coupling, ev.dgamma_p - 0.5 * coupling};
}

}  // namespace

LegendreResult gamma_hat(const Mixture& mix, const OrderParameter& op,
                         const GammaHatOptions& opts) {
  const double coupling = alpha_moments(op, mix).int_alpha_xi_prime;
  LegendreResult res;

  ObjectiveSample lo = sample_objective(mix, op, opts.gamma_lo, coupling);
  ++res.evaluations;
  if (lo.slope < -opts.slope_tol) {
    // Concavity puts the supremum at the 0+ boundary.
    res.kind = LegendreResult::Kind::finite;
    res.value = lo.value;
    res.argmax_lo = res.argmax_hi = opts.gamma_lo;
    res.slope_at_argmax = lo.slope;
    return res;
  }

  // Expand geometrically until the derivative turns negative.
  double lo_gamma = opts.gamma_lo;
  double hi_gamma = 0.25;
  bool all_flat = std::fabs(lo.slope) <= opts.flat_tol;
  double best_value = lo.value;
  ObjectiveSample hi{};
  bool bracketed = false;
  while (hi_gamma <= opts.gamma_max) {
    hi = sample_objective(mix, op, hi_gamma, coupling);
    ++res.evaluations;
    best_value = std::max(best_value, hi.value);
    if (hi.slope < -opts.slope_tol) {
      bracketed = true;
      break;
    }
    all_flat = all_flat && std::fabs(hi.slope) <= opts.flat_tol;
    lo_gamma = hi_gamma;
    hi_gamma *= 4.0;
  }

  if (!bracketed) {
    if (all_flat) {
      res.kind = LegendreResult::Kind::flat;
      res.value = best_value;
      res.argmax_lo = opts.gamma_lo;
      res.argmax_hi = lo_gamma;
      res.slope_at_argmax = 0.0;
    } else {
      res.kind = LegendreResult::Kind::divergent;
      res.value = std::numeric_limits<double>::infinity();
      res.argmax_lo = res.argmax_hi = std::numeric_limits<double>::infinity();
      res.slope_at_argmax = hi.slope;
    }
    return res;
  }

  // Bisection on the nonincreasing derivative.
  double a = lo_gamma, b = hi_gamma;
  ObjectiveSample mid{};
  double gamma_star = 0.5 * (a + b);
  for (int it = 0; it < opts.max_bisect; ++it) {
    gamma_star = 0.5 * (a + b);
    mid = sample_objective(mix, op, gamma_star, coupling);
    ++res.evaluations;
    if (std::fabs(mid.slope) <= opts.slope_tol || b - a <= 1e-12 * std::max(1.0, b)) break;
    (mid.slope > 0.0 ? a : b) = gamma_star;
  }
  res.kind = LegendreResult::Kind::finite;
  res.value = mid.value;
  res.argmax_lo = res.argmax_hi = gamma_star;
  res.slope_at_argmax = mid.slope;
  return res;
}

PhatCurve::PhatCurve(Mixture mix, int k, MinimizeOptions opts)
    : mix_(std::move(mix)), k_(k), opts_(std::move(opts)) {}

const ParisiMeasure& PhatCurve::at(double gamma) {
  auto it = cache_.find(gamma);
  if (it != cache_.end()) return it->second;

  MinimizeOptions local = opts_;
  if (!cache_.empty()) {
    // Warm start from the nearest cached gamma.
    auto up = cache_.lower_bound(gamma);
    const ParisiMeasure* nearest = nullptr;
    if (up != cache_.end()) nearest = &up->second;
    if (up != cache_.begin()) {
      auto down = std::prev(up);
      if (!nearest || gamma - down->first < up->first - gamma) nearest = &down->second;
    }
    local.warm_start = nearest->op;
    local.starts = 4;
    local.max_restart_cycles = 2;
  }
  ParisiMeasure pm = minimize(mix_, gamma, k_, local);
  return cache_.emplace(gamma, std::move(pm)).first->second;
}

PhatCurve::SupResult PhatCurve::sup_linear_offset(double c, double lo, double hi, int coarse) {
  SupResult best;
  best.value = -std::numeric_limits<double>::infinity();
  const auto objective = [&](double gamma) {
    ++best.evaluations;
    return at(gamma).value - 0.5 * gamma * c;
  };

  // Coarse geometric scan to localize, then golden-section (concave).
  std::vector<double> probes;
  const double ratio = std::pow(hi / lo, 1.0 / (coarse - 1));
  double g = lo;
  for (int i = 0; i < coarse; ++i, g *= ratio) probes.push_back(std::min(g, hi));
  int best_idx = 0;
  std::vector<double> values(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    values[i] = objective(probes[i]);
    if (values[i] > values[static_cast<std::size_t>(best_idx)]) best_idx = static_cast<int>(i);
  }
  double a = probes[static_cast<std::size_t>(std::max(best_idx - 1, 0))];
  double b = probes[static_cast<std::size_t>(
      std::min<int>(best_idx + 1, static_cast<int>(probes.size()) - 1))];

  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > 1e-3 * std::max(1.0, b)) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = objective(x1);
    }
  }
  best.gamma_star = f1 > f2 ? x1 : x2;
  best.value = std::max(f1, f2);
  // The coarse scan may have seen a better endpoint (flat objectives).
  for (std::size_t i = 0; i < probes.size(); ++i)
    if (values[i] > best.value) {
      best.value = values[i];
      best.gamma_star = probes[i];
    }
  return best;
}

ForwardDualityReport duality_forward(const Mixture& mix, double gamma, int k, double tol,
                                     const MinimizeOptions& opts) {
  ForwardDualityReport rep;
  rep.gamma = gamma;
  const ParisiMeasure pm = minimize(mix, gamma, k, opts);
  rep.p_hat_min = pm.value;

  const LegendreResult gh = gamma_hat(mix, pm.op);
  rep.gamma_hat_value = gh.value;
  rep.reconstruction = gh.value + 0.5 * gamma * pm.int_alpha_xiprime;
  rep.residual = std::fabs(rep.reconstruction - rep.p_hat_min);
  rep.pass = rep.residual <= tol;

  // Fenchel inequality panel on deliberately non-optimal step functions.
  for (int i = 1; i <= 5; ++i) {
    const double q = i / 6.0;
    const OrderParameter probe = OrderParameter::single_atom(q);
    const double c = alpha_moments(probe, mix).int_alpha_xi_prime;
    const LegendreResult g = gamma_hat(mix, probe);
    DualityCheck chk;
    chk.label = "single-atom q=" + std::to_string(q);
    chk.lhs = g.value + 0.5 * gamma * c;
    chk.rhs = rep.p_hat_min;
    chk.residual = chk.lhs - chk.rhs;
    chk.pass = chk.lhs >= chk.rhs - 1e-8;
    rep.panel.push_back(chk);
    rep.pass = rep.pass && chk.pass;
  }
  for (int i = 1; i <= 5; ++i) {
    const double m1 = i / 6.0;
    const OrderParameter probe(2, {0.25, 0.75}, {m1});
    const double c = alpha_moments(probe, mix).int_alpha_xi_prime;
    const LegendreResult g = gamma_hat(mix, probe);
    DualityCheck chk;
    chk.label = "two-atom m1=" + std::to_string(m1);
    chk.lhs = g.value + 0.5 * gamma * c;
    chk.rhs = rep.p_hat_min;
    chk.residual = chk.lhs - chk.rhs;
    chk.pass = chk.lhs >= chk.rhs - 1e-8;
    rep.panel.push_back(chk);
    rep.pass = rep.pass && chk.pass;
  }
  return rep;
}

InverseDualityReport duality_inverse(PhatCurve& curve, const OrderParameter& op,
                                     double claimed_gamma, double tol) {
  const Mixture& mix = curve.mix();
  // Certify op as a (numerical) Parisi measure at claimed_gamma: residuals
  // small and no value gap against the minimized curve.
  const Evaluation ev = evaluate(mix, op, claimed_gamma);
  double max_res = 0.0;
  for (double r : stationarity_residual(ev, op)) max_res = std::max(max_res, std::fabs(r));
  if (max_res > 1e-3)
    throw NotAParisiMeasure("legendre: stationarity residual " + std::to_string(max_res) +
                            " too large at claimed gamma");
  const double value_gap = ev.p_hat - curve.at(claimed_gamma).value;
  if (value_gap > 5e-4)
    throw NotAParisiMeasure("legendre: value gap " + std::to_string(value_gap) +
                            " above the minimized curve at claimed gamma");

  InverseDualityReport rep;
  rep.claimed_gamma = claimed_gamma;
  rep.gamma_hat_value = gamma_hat(mix, op).value;
  const double c = alpha_moments(op, mix).int_alpha_xi_prime;
  const auto sup = curve.sup_linear_offset(c, claimed_gamma / 8.0, claimed_gamma * 8.0);
  rep.sup_value = sup.value;
  rep.sup_gamma = sup.gamma_star;
  rep.residual = std::fabs(rep.sup_value - rep.gamma_hat_value);
  rep.pass = rep.residual <= tol;
  return rep;
}

InverseDualityReport duality_inverse(const Mixture& mix, const OrderParameter& op,
                                     double claimed_gamma, int k, double tol,
                                     const MinimizeOptions& opts) {
  PhatCurve curve(mix, k, opts);
  return duality_inverse(curve, op, claimed_gamma, tol);
}

LhatResult l_hat(PhatCurve& curve, const OrderParameter& op, double gamma_hint) {
  LhatResult res;
  const double c = alpha_moments(op, curve.mix()).int_alpha_xi_prime;
  if (c <= 1e-15) {
    // alpha = 0 on [0,1): the transform's derivative stays positive.
    res.infinite = true;
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  const auto sup = curve.sup_linear_offset(c, gamma_hint / 8.0, gamma_hint * 8.0);
  res.value = sup.value;
  res.sup_gamma = sup.gamma_star;
  return res;
}

NonUniquenessDemo demo_lhat_non_uniqueness(PhatCurve& curve, double gamma, double tol) {
  const Mixture& mix = curve.mix();
  const ParisiMeasure& pm = curve.at(gamma);
  const double c = pm.int_alpha_xiprime;
  if (mix.xi(1.0) - c <= 1e-12 || c <= 1e-12)
    throw InvalidParameter(
        "legendre: minimizer is a boundary measure; the matching-integral family is trivial");

  // Witness 0: one atom at q with int alpha xi' = xi(1) - xi(q) = c.
  double lo = 0.0, hi = 1.0;
  const double target = mix.xi(1.0) - c;
  for (int i = 0; i < 200; ++i) {
    const double midq = 0.5 * (lo + hi);
    (mix.xi(midq) < target ? lo : hi) = midq;
  }
  const OrderParameter alpha0 = OrderParameter::single_atom(0.5 * (lo + hi));

  // Witness 1: atoms at fixed q1 < q2, one linear constraint on the mass:
  // m1 (xi(q2) - xi(q1)) + (xi(1) - xi(q2)) = c.
  const double q1 = 0.5 * alpha0.atom(0);  // strictly left of witness 0's atom
  double q2 = alpha0.atom(0) + 0.6 * (1.0 - alpha0.atom(0));
  double m1 = (c - (mix.xi(1.0) - mix.xi(q2))) / (mix.xi(q2) - mix.xi(q1));
  if (!(m1 > 0.0 && m1 < 1.0)) {
    q2 = alpha0.atom(0) + 0.3 * (1.0 - alpha0.atom(0));
    m1 = (c - (mix.xi(1.0) - mix.xi(q2))) / (mix.xi(q2) - mix.xi(q1));
  }
  const OrderParameter alpha1(2, {q1, q2}, {m1});

  NonUniquenessDemo demo{alpha0, alpha1, c, 0, 0, false};
  const double p_here = curve.at(gamma).value;
  const LhatResult l0 = l_hat(curve, alpha0, gamma);
  const LhatResult l1 = l_hat(curve, alpha1, gamma);
  demo.residual0 = std::fabs(l0.value + 0.5 * gamma * c - p_here);
  demo.residual1 = std::fabs(l1.value + 0.5 * gamma * c - p_here);
  demo.pass = !(alpha0 == alpha1) && demo.residual0 <= tol && demo.residual1 <= tol;
  return demo;
}

double concavity_certificate(const Mixture& mix, const OrderParameter& op,
                             const std::vector<double>& gamma_grid) {
  if (gamma_grid.size() < 3)
    throw InvalidParameter("legendre: need at least 3 grid points for second differences");
  const GridSpec grid = GridSpec::for_model(mix, gamma_grid.back());
  std::vector<double> phi(gamma_grid.size());
  for (std::size_t i = 0; i < gamma_grid.size(); ++i)
    phi[i] = solve_cascade(mix, op, gamma_grid[i], grid).phi00();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < phi.size(); ++i)
    worst = std::max(worst, phi[i - 1] - 2.0 * phi[i] + phi[i + 1]);
  return worst;
}

double beta_convexity_certificate(const Mixture& mix, const OrderParameter& op,
                                  const std::vector<double>& beta_grid) {
  if (beta_grid.size() < 3)
    throw InvalidParameter("legendre: need at least 3 grid points for second differences");
  const double gmax = beta_grid.back() * beta_grid.back();
  const GridSpec grid = GridSpec::for_model(mix, gmax);
  std::vector<double> phi(beta_grid.size());
  for (std::size_t i = 0; i < beta_grid.size(); ++i)
    phi[i] = solve_cascade(mix, op, beta_grid[i] * beta_grid[i], grid).phi00();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < phi.size(); ++i)
    worst = std::min(worst, phi[i - 1] - 2.0 * phi[i] + phi[i + 1]);
  return worst;
}

}  // namespace parisi
