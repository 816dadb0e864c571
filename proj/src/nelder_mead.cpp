#include "parisi/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace parisi {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  NelderMeadResult result;
  if (n == 0) {
    result.x = x0;
    result.fmin = f(x0);
    result.evaluations = 1;
    result.converged = true;
    return result;
  }

  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    xs[i + 1][i] += x0[i] != 0.0 ? opts.step * std::fabs(x0[i]) + opts.step : opts.step;
  for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);
  result.evaluations = static_cast<int>(n + 1);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];

    double spread = fs[worst] - fs[best];
    double diam = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diam = std::max(diam, std::fabs(xs[worst][i] - xs[best][i]));
    if (spread <= opts.f_tol || diam <= opts.x_tol) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < n; ++i) centroid[i] += xs[k][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend_point = [&](std::vector<double>& dst, double coef) {
      for (std::size_t i = 0; i < n; ++i)
        dst[i] = centroid[i] + coef * (xs[worst][i] - centroid[i]);
    };

    blend_point(xr, -1.0);
    const double fr = f(xr);
    ++result.evaluations;

    if (fr < fs[best]) {
      blend_point(xe, -2.0);
      const double fe = f(xe);
      ++result.evaluations;
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[second_worst]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      blend_point(xc, outside ? -0.5 : 0.5);
      const double fc = f(xc);
      ++result.evaluations;
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t k = 0; k <= n; ++k) {
          if (k == best) continue;
          for (std::size_t i = 0; i < n; ++i)
            xs[k][i] = xs[best][i] + 0.5 * (xs[k][i] - xs[best][i]);
          fs[k] = f(xs[k]);
          ++result.evaluations;
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fs[i] < fs[best]) best = i;
  result.x = xs[best];
  result.fmin = fs[best];
  return result;
}

}  // namespace parisi
