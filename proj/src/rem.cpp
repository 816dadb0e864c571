#include "parisi/rem.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "parisi/errors.hpp"
#include "parisi/rng.hpp"

namespace parisi {

RemPoint p_rem(double gamma) {
  if (!(gamma >= 0.0)) throw InvalidTemperature("rem: gamma must be nonnegative");
  RemPoint pt;
  pt.gamma = gamma;
  if (gamma <= 2.0 * M_LN2) {
    pt.p_hat = 0.5 * gamma + M_LN2;
    pt.regime = RemPoint::Regime::high_temp;
  } else {
    pt.p_hat = std::sqrt(2.0 * gamma * M_LN2);
    pt.regime = RemPoint::Regime::low_temp;
  }
  return pt;
}

RemLegendre gamma_rem(double m) {
  if (!(m > 0.0) || m > 1.0) throw InvalidParameter("rem: m must lie in (0,1]");
  RemLegendre lg;
  lg.value = M_LN2 / m;
  if (m == 1.0) {
    lg.maximizer_lo = 0.0;  // open at 0
    lg.maximizer_hi = 2.0 * M_LN2;
  } else {
    lg.maximizer_lo = lg.maximizer_hi = 2.0 * M_LN2 / (m * m);
  }
  return lg;
}

RemInf rem_variational_inf(double gamma) {
  if (!(gamma > 0.0)) throw InvalidTemperature("rem: gamma must be positive");
  RemInf inf;
  inf.argmin_m = std::min(1.0, std::sqrt(2.0 * M_LN2 / gamma));
  inf.value = M_LN2 / inf.argmin_m + 0.5 * gamma * inf.argmin_m;
  return inf;
}

RemMcResult rem_finite_n_mc(int n_spins, int samples, double gamma, std::uint64_t seed) {
  if (n_spins < 1 || n_spins > 24)
    throw ResourceLimit("rem: enumeration limited to 1 <= N <= 24 spins");
  if (samples < 16) throw InvalidParameter("rem: need at least 16 samples");
  if (!(gamma >= 0.0)) throw InvalidTemperature("rem: gamma must be nonnegative");

  const std::uint64_t count = 1ull << n_spins;
  const double scale = std::sqrt(gamma * n_spins);
  std::vector<double> values(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    CounterRng rng(seed, static_cast<std::uint64_t>(s));
    // Online log-sum-exp: track running max and rescale the partial sum.
    double max_term = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (std::uint64_t j = 0; j < count; ++j) {
      const double e = scale * rng.normal(j);
      if (e <= max_term) {
        acc += std::exp(e - max_term);
      } else {
        acc = acc * std::exp(max_term - e) + 1.0;
        max_term = e;
      }
    }
    values[static_cast<std::size_t>(s)] = (max_term + std::log(acc)) / n_spins;
  }
  RemMcResult res;
  res.n_spins = n_spins;
  res.samples = samples;
  double sum = 0.0;
  for (double v : values) sum += v;
  res.estimate = sum / samples;
  double ss = 0.0;
  for (double v : values) ss += (v - res.estimate) * (v - res.estimate);
  res.std_error = std::sqrt(ss / (samples - 1) / samples);
  return res;
}

}  // namespace parisi
