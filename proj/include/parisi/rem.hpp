#pragma once

#include <cstdint>

namespace parisi {

/// Random Energy Model closed forms: the exact Legendre-structure oracle.
struct RemPoint {
  enum class Regime { high_temp, low_temp };
  double gamma = 0;
  double p_hat = 0;
  Regime regime = Regime::high_temp;
};

/// gamma/2 + log 2 for gamma <= 2 log 2, sqrt(2 gamma log 2) above.
RemPoint p_rem(double gamma);

struct RemLegendre {
  double value = 0;         // log 2 / m
  double maximizer_lo = 0;  // m == 1: the interval (0, 2 log 2]; else a point
  double maximizer_hi = 0;
};

RemLegendre gamma_rem(double m);

struct RemInf {
  double value = 0;
  double argmin_m = 0;  // min(1, sqrt(2 log 2 / gamma))
};

/// inf_{m in [0,1]} (log2/m + gamma m / 2), evaluated at the closed-form
/// argmin; equals p_rem(gamma).
RemInf rem_variational_inf(double gamma);

struct RemMcResult {
  double estimate = 0;
  double std_error = 0;
  int n_spins = 0;
  int samples = 0;
};

/// Monte Carlo of (1/N) log sum_sigma exp(sqrt(gamma N) g_sigma) over
/// enumerated i.i.d. Gaussian energies, streamed through an online
/// log-sum-exp; deterministic given the seed.
RemMcResult rem_finite_n_mc(int n_spins, int samples, double gamma, std::uint64_t seed);

}  // namespace parisi
