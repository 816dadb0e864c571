#pragma once

#include <functional>
#include <vector>

namespace parisi {

struct NelderMeadOptions {
  int max_iter = 600;
  double f_tol = 1e-12;   // stop when the simplex value spread falls below
  double x_tol = 1e-10;   // ... or the simplex diameter does
  double step = 0.15;     // initial simplex edge
};

struct NelderMeadResult {
  std::vector<double> x;
  double fmin = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Classical downhill simplex (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2) for smallish dimensions.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts = {});

}  // namespace parisi
