#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parisi/functional.hpp"

namespace parisi {

struct MinimizeOptions {
  int starts = 8;               // seeded multi-starts (alpha==1, ladder, random)
  int max_restart_cycles = 4;   // polish cycles around the incumbent
  double improve_tol = 1e-10;   // convergence: cycle improvement below this
  int nm_max_iter = 600;
  std::uint64_t seed = 0x5eedf00dull;   // fixed for reproducible starts
  std::optional<GridSpec> search_grid;  // cheaper grid for the inner objective
  std::optional<GridSpec> final_grid;   // reporting grid (model default if empty)
  std::optional<OrderParameter> warm_start;
  int threads = 0;  // 0: hardware choice; starts run concurrently
};

struct ParisiMeasure {
  OrderParameter op;
  double gamma = 0;
  double value = 0;                 // minimized p_hat, on the reporting grid
  std::vector<double> residuals;    // E u(q_l)^2 - q_l at the atoms
  double overlap_moment = 0;        // int xi d(alpha)
  double int_alpha_xiprime = 0;     // int alpha xi' ds
  bool converged = false;
};

/// Local minimization of p_hat over k-step order parameters by multi-start
/// Nelder-Mead in an unconstrained reparametrization.
ParisiMeasure minimize(const Mixture& mix, double gamma, int k,
                       const MinimizeOptions& opts = {});

struct ScanRow {
  double gamma = 0;
  double beta = 0;
  double value = 0;
  double dvalue_fd = 0;  // centered finite difference of the minimized curve
  double int_alpha_xiprime = 0;
  double overlap_moment = 0;
  double max_residual = 0;
  bool converged = false;
};

/// Ascending-gamma scan with warm starts from the previous minimizer.
std::vector<ScanRow> temperature_scan(const Mixture& mix, const std::vector<double>& gammas,
                                      int k, const MinimizeOptions& opts = {});

/// int_0^1 xi d(alpha) in closed form.
double overlap_moment(const OrderParameter& op, const Mixture& mix);

/// Unconstrained reparametrization: q (and the free masses m) are cumulative
/// sums of squared parameters, normalized into [0,1]. Exposed for tests.
std::vector<double> op_to_params(const OrderParameter& op, int k);
OrderParameter params_to_op(int k, const std::vector<double>& params);
int param_count(int k);

}  // namespace parisi
