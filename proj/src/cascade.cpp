#include "parisi/cascade.hpp"

#include <algorithm>
#include <cmath>

#include "parisi/errors.hpp"
#include "parisi/gauss_hermite.hpp"

namespace parisi {

double log_cosh(double x) {
  const double a = std::fabs(x);
  return a - M_LN2 + std::log1p(std::exp(-2.0 * a));
}

namespace {

// Gathers samples of a level function at x_j + shift for every grid point j
// and quadrature node, as one column per node. Interior points use the fixed
// 4-point cubic stencil (the fractional offset is the same for all j);
// points past the grid use either the clamped linear tail (psi-like arrays)
// or the edge value (bounded integrands).
enum class TailRule { linear_slope, edge_value };

void gather_shifted(const GridSpec& g, const Eigen::ArrayXd& f, double scale,
                    const Eigen::ArrayXd& nodes, TailRule tail, double slope_hint,
                    Eigen::ArrayXXd& out) {
  const int n_pts = static_cast<int>(f.size());
  const int n_nodes = static_cast<int>(nodes.size());
  out.resize(n_pts, n_nodes);

  const double slope_r =
      tail == TailRule::linear_slope ? std::clamp(slope_hint, -1.0, 1.0) : 0.0;
  const double slope_l = -slope_r;
  const double f_left = f[0], f_right = f[n_pts - 1];

  for (int i = 0; i < n_nodes; ++i) {
    const double off = scale * nodes[i] / g.spacing;  // shift in grid units
    const double dflr = std::floor(off);
    const int d = static_cast<int>(dflr);
    const double t = off - dflr;
    // Stencil weights at fractional offset t on nodes {-1,0,1,2}.
    const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;

    const int lo = std::max(0, 1 - d);
    const int hi = std::min(n_pts - 1, n_pts - 3 - d);
    if (lo <= hi) {
      const int len = hi - lo + 1;
      out.col(i).segment(lo, len) = w0 * f.segment(lo + d - 1, len) +
                                    w1 * f.segment(lo + d, len) +
                                    w2 * f.segment(lo + d + 1, len) +
                                    w3 * f.segment(lo + d + 2, len);
    }
    for (int pass = 0; pass < 2; ++pass) {
      const int jb = pass == 0 ? 0 : std::max(hi + 1, 0);
      const int je = pass == 0 ? std::min(lo - 1, n_pts - 1) : n_pts - 1;
      for (int j = jb; j <= je; ++j) {
        const double c = j + off;  // continuous grid coordinate of x_j + shift
        if (c < 0.0) {
          out(j, i) = tail == TailRule::linear_slope ? f_left + slope_l * (c * g.spacing)
                                                     : f_left;
        } else if (c > n_pts - 1) {
          out(j, i) = tail == TailRule::linear_slope
                          ? f_right + slope_r * ((c - (n_pts - 1)) * g.spacing)
                          : f_right;
        } else {
          const CubicStencil s = cubic_stencil(c, n_pts);
          out(j, i) = s.w[0] * f[s.base] + s.w[1] * f[s.base + 1] +
                      s.w[2] * f[s.base + 2] + s.w[3] * f[s.base + 3];
        }
      }
    }
  }
}

struct StepScratch {
  Eigen::ArrayXXd a, d, w;
  Eigen::ArrayXd mx, sum;
};

StepScratch& scratch() {
  thread_local StepScratch s;
  return s;
}

void mirror_even_odd(Eigen::ArrayXd& even, Eigen::ArrayXd& odd) {
  const int n = static_cast<int>(even.size());
  const int mid = (n - 1) / 2;
  for (int j = 0; j < mid; ++j) {
    even[j] = even[n - 1 - j];
    odd[j] = -odd[n - 1 - j];
  }
  odd[mid] = 0.0;
}

}  // namespace

void cascade_step(const GridSpec& g, double gamma, double m, double variance,
                  const Eigen::ArrayXd& psi_next, const Eigen::ArrayXd& dpsi_next,
                  Eigen::ArrayXd& psi_out, Eigen::ArrayXd& dpsi_out) {
  if (variance <= 0.0 || gamma == 0.0) {
    psi_out = psi_next;
    dpsi_out = dpsi_next;
    return;
  }
  const GaussHermite& gh = gauss_hermite(g.quad_nodes);
  const double scale = std::sqrt(2.0 * gamma * variance);
  const int n_pts = static_cast<int>(psi_next.size());

  StepScratch& ws = scratch();
  const double edge_slope = dpsi_next[n_pts - 1];
  gather_shifted(g, psi_next, scale, gh.nodes, TailRule::linear_slope, edge_slope, ws.a);
  gather_shifted(g, dpsi_next, scale, gh.nodes, TailRule::edge_value,
                 std::clamp(edge_slope, -1.0, 1.0), ws.d);
  // Derivative samples beyond the grid are the clamped tail slope.
  // gather_shifted wrote the raw edge value; both coincide after the final
  // clamp of dpsi_out below, since weights are a convex combination.

  if (m > kTinyTilt) {
    ws.a *= m;
    ws.mx = ws.a.rowwise().maxCoeff();
    ws.w = (ws.a.colwise() - ws.mx).exp();
    ws.w = ws.w.rowwise() * gh.weights.transpose();
    ws.sum = ws.w.rowwise().sum();
    psi_out = (ws.mx + ws.sum.log()) / m;
    dpsi_out = (ws.w * ws.d).rowwise().sum() / ws.sum;
  } else {
    psi_out = (ws.a.matrix() * gh.weights.matrix()).array();
    dpsi_out = (ws.d.matrix() * gh.weights.matrix()).array();
  }
  dpsi_out = dpsi_out.min(1.0).max(-1.0);
  mirror_even_odd(psi_out, dpsi_out);
}

LevelSolution solve_cascade(const Mixture& mix, const OrderParameter& op, double gamma,
                            const GridSpec& grid) {
  if (!(gamma >= 0.0)) throw InvalidTemperature("pde_core: gamma must be nonnegative");
  grid.validate();
  const double sigma = std::sqrt(gamma * mix.xi_prime(1.0));
  if (grid.half_width < 6.0 * sigma * (1.0 - 1e-12))
    throw GridTooNarrow("pde_core: grid narrower than 6 sigma of total noise");

  LevelSolution sol(mix, op);
  sol.gamma = gamma;
  sol.grid = grid;
  sol.q = op.level_boundaries();
  sol.m = op.level_values();
  const int n_levels = sol.levels();
  sol.v.resize(static_cast<std::size_t>(n_levels) - 1);
  for (int l = 0; l + 1 < n_levels; ++l)
    sol.v[static_cast<std::size_t>(l)] = mix.xi_prime(sol.q[l + 1]) - mix.xi_prime(sol.q[l]);

  const int n_pts = grid.points();
  sol.psi.assign(static_cast<std::size_t>(n_levels), Eigen::ArrayXd(n_pts));
  sol.dpsi.assign(static_cast<std::size_t>(n_levels), Eigen::ArrayXd(n_pts));

  Eigen::ArrayXd& terminal = sol.psi.back();
  Eigen::ArrayXd& dterminal = sol.dpsi.back();
  for (int j = 0; j < n_pts; ++j) {
    const double x = grid.x(j);
    terminal[j] = log_cosh(x);
    dterminal[j] = std::tanh(x);
  }
  mirror_even_odd(terminal, dterminal);

  for (int l = n_levels - 1; l >= 1; --l)
    cascade_step(grid, gamma, sol.m[l - 1], sol.v[l - 1], sol.psi[l], sol.dpsi[l],
                 sol.psi[l - 1], sol.dpsi[l - 1]);
  return sol;
}

LevelSolution solve_cascade(const Mixture& mix, const OrderParameter& op, double gamma) {
  return solve_cascade(mix, op, gamma, GridSpec::for_model(mix, gamma));
}

ValueSlope LevelSolution::value_slope(int level, double x) const {
  const auto l = static_cast<std::size_t>(level);
  const Eigen::ArrayXd& f = psi[l];
  const Eigen::ArrayXd& df = dpsi[l];
  const int n_pts = static_cast<int>(f.size());
  const double u = std::fabs(x);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  ValueSlope r;
  if (u <= grid.half_width) {
    r.value = interp_cubic(f, grid, u);
    r.slope = sign * std::clamp(interp_cubic(df, grid, u), -1.0, 1.0);
  } else {
    const double slope_r = std::clamp(df[n_pts - 1], -1.0, 1.0);
    r.value = f[n_pts - 1] + slope_r * (u - grid.half_width);
    r.slope = sign * slope_r;
  }
  return r;
}

ValueSlope phi_value(const LevelSolution& sol, int level, double x) {
  if (level < 0 || level >= sol.levels())
    throw InvalidParameter("pde_core: level index out of range");
  return sol.value_slope(level, x);
}

double tilted_expectation_grid(const LevelSolution& sol, const Eigen::ArrayXd& f_samples,
                               int b) {
  if (b < 0 || b >= sol.levels())
    throw InvalidParameter("pde_core: tilt level out of range");
  if (!f_samples.isFinite().all())
    throw InvalidIntegrand("pde_core: integrand not finite on the grid");
  const GaussHermite& gh = gauss_hermite(sol.grid.quad_nodes);
  const int n_pts = sol.grid.points();

  Eigen::ArrayXd g_arr = f_samples;
  StepScratch& ws = scratch();
  for (int l = b; l >= 1; --l) {
    const double m = sol.m[static_cast<std::size_t>(l - 1)];
    const double variance = sol.v[static_cast<std::size_t>(l - 1)];
    if (variance <= 0.0 || sol.gamma == 0.0) continue;  // degenerate stretch: state frozen
    const double scale = std::sqrt(2.0 * sol.gamma * variance);
    const Eigen::ArrayXd& psi_next = sol.psi[static_cast<std::size_t>(l)];
    gather_shifted(sol.grid, g_arr, scale, gh.nodes, TailRule::edge_value, 0.0, ws.d);
    if (m > kTinyTilt) {
      gather_shifted(sol.grid, psi_next, scale, gh.nodes, TailRule::linear_slope,
                     sol.dpsi[static_cast<std::size_t>(l)][n_pts - 1], ws.a);
      ws.a *= m;
      ws.mx = ws.a.rowwise().maxCoeff();
      ws.w = (ws.a.colwise() - ws.mx).exp();
      ws.w = ws.w.rowwise() * gh.weights.transpose();
      ws.sum = ws.w.rowwise().sum();
      g_arr = (ws.w * ws.d).rowwise().sum() / ws.sum;
    } else {
      g_arr = (ws.d.matrix() * gh.weights.matrix()).array();
    }
  }
  return g_arr[sol.grid.mid()];
}

double tilted_expectation(const LevelSolution& sol, const std::function<double(double)>& f,
                          int b) {
  const int n_pts = sol.grid.points();
  Eigen::ArrayXd samples(n_pts);
  for (int j = 0; j < n_pts; ++j) samples[j] = f(sol.grid.x(j));
  return tilted_expectation_grid(sol, samples, b);
}

TiltedValues expected_u_squared(const LevelSolution& sol) {
  TiltedValues tv;
  tv.eu2.resize(static_cast<std::size_t>(sol.levels()));
  for (int b = 0; b < sol.levels(); ++b) {
    const Eigen::ArrayXd f = sol.dpsi[static_cast<std::size_t>(b)].square();
    tv.eu2[static_cast<std::size_t>(b)] = tilted_expectation_grid(sol, f, b);
  }
  return tv;
}

}  // namespace parisi
