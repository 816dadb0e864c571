#include "parisi/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "parisi/errors.hpp"
#include "parisi/rng.hpp"

namespace parisi {

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

MeanSe mean_se(const Eigen::ArrayXd& values) {
  const auto n = static_cast<std::size_t>(values.size());
  MeanSe r;
  r.mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  Eigen::ArrayXd centered = (values - r.mean).square();
  const double var = pairwise_sum(centered.data(), n) / static_cast<double>(n - 1);
  r.se = std::sqrt(var / static_cast<double>(n));
  return r;
}

namespace {

// Per-time-step tables: dpsi (for the drift/control) and its centered second
// difference (for the Ito identity), sampled on the solver grid.
struct StepTables {
  std::vector<double> s;        // time, includes every q_l exactly
  std::vector<double> tau;      // xi'(s)
  std::vector<double> alpha;    // level value on [s_j, s_{j+1})
  std::vector<int> checkpoint;  // level index b when s_j == q_b, else -1
  std::vector<Eigen::ArrayXd> dpsi;
  std::vector<Eigen::ArrayXd> ddpsi;
};

Eigen::ArrayXd second_difference(const Eigen::ArrayXd& f, double h) {
  const int n = static_cast<int>(f.size());
  Eigen::ArrayXd d(n);
  for (int j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

StepTables build_tables(const LevelSolution& sol, int n_steps) {
  const Mixture& mix = sol.mix;
  const double tau_total = mix.xi_prime(1.0);

  // xi'-uniform grid, then splice in the exact level boundaries.
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(n_steps) + sol.q.size() + 1);
  for (int j = 0; j <= n_steps; ++j)
    s.push_back(mix.xi_prime_inverse(tau_total * j / n_steps));
  s.insert(s.end(), sol.q.begin(), sol.q.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());

  StepTables t;
  t.s = std::move(s);
  const std::size_t n = t.s.size();
  t.tau.resize(n);
  t.alpha.resize(n);
  t.checkpoint.assign(n, -1);
  t.dpsi.resize(n);
  t.ddpsi.resize(n);

  const auto& q = sol.q;
  for (std::size_t j = 0; j < n; ++j) {
    t.tau[j] = mix.xi_prime(t.s[j]);
    // level l with s in [q_l, q_{l+1}), scanning from the right so that
    // boundary points use the stretch they open.
    int level = 0;
    for (int l = static_cast<int>(q.size()) - 2; l >= 0; --l)
      if (t.s[j] >= q[static_cast<std::size_t>(l)]) {
        level = l;
        break;
      }
    t.alpha[j] = sol.m[static_cast<std::size_t>(level)];

    for (std::size_t b = 0; b < q.size(); ++b)
      if (t.s[j] == q[b]) t.checkpoint[j] = static_cast<int>(b);

    if (t.checkpoint[j] >= 0) {
      t.dpsi[j] = sol.dpsi[static_cast<std::size_t>(t.checkpoint[j])];
    } else {
      // Hopf-Cole step to the next boundary: partial variance
      // xi'(q_{l+1}) - xi'(s) under the stretch tilt.
      const double vpart = mix.xi_prime(q[static_cast<std::size_t>(level + 1)]) - t.tau[j];
      Eigen::ArrayXd psi_j, dpsi_j;
      cascade_step(sol.grid, sol.gamma, t.alpha[j], vpart,
                   sol.psi[static_cast<std::size_t>(level + 1)],
                   sol.dpsi[static_cast<std::size_t>(level + 1)], psi_j, dpsi_j);
      t.dpsi[j] = std::move(dpsi_j);
    }
    t.ddpsi[j] = second_difference(t.dpsi[j], sol.grid.spacing);
  }
  // Duplicate-position checkpoints (zero-width stretches) resolve to the
  // later level; mark the final time as the terminal checkpoint.
  t.checkpoint[n - 1] = static_cast<int>(q.size()) - 1;
  return t;
}

double sample_even_grid(const Eigen::ArrayXd& f, const GridSpec& g, double x, bool odd) {
  const double u = std::fabs(x);
  const double sign = odd && x < 0.0 ? -1.0 : 1.0;
  if (u <= g.half_width) return sign * interp_cubic(f, g, u);
  return sign * f[f.size() - 1];
}

}  // namespace

PathBatch simulate(const LevelSolution& sol, const SimulateOptions& opts) {
  if (opts.n_steps < 200) throw InvalidParameter("sde_oracle: need at least 200 steps");
  if (opts.n_paths < 2) throw InvalidParameter("sde_oracle: need at least 2 paths");
  if (opts.control == ControlKind::custom && !opts.custom_control)
    throw InvalidParameter("sde_oracle: custom control function missing");
  if (opts.record_trajectories && opts.n_paths > 1000)
    throw InvalidParameter("sde_oracle: trajectory recording limited to 1000 paths");

  const StepTables tables = build_tables(sol, opts.n_steps);
  const std::size_t n_times = tables.s.size();
  const double gamma = sol.gamma;
  const int n_checkpoints = sol.levels();
  std::vector<Eigen::ArrayXd> cp_ddpsi(static_cast<std::size_t>(n_checkpoints));
  for (int b = 0; b < n_checkpoints; ++b)
    cp_ddpsi[static_cast<std::size_t>(b)] =
        second_difference(sol.dpsi[static_cast<std::size_t>(b)], sol.grid.spacing);

  PathBatch batch;
  batch.gamma = gamma;
  batch.x0 = opts.x0;
  batch.control = opts.control;
  batch.time = tables.s;
  batch.checkpoints = sol.q;
  batch.objective.resize(opts.n_paths);
  batch.x_final.resize(opts.n_paths);
  batch.u_at_checkpoints.resize(n_checkpoints, opts.n_paths);
  batch.ddpsi_at_checkpoints.resize(n_checkpoints, opts.n_paths);
  batch.ddpsi_sq_integral.resize(opts.n_paths);
  if (opts.record_trajectories) {
    batch.trajectories_x.assign(static_cast<std::size_t>(opts.n_paths), {});
    batch.trajectories_u.assign(static_cast<std::size_t>(opts.n_paths), {});
  }

  const auto run_path = [&](int p) {
    CounterRng rng(opts.seed, static_cast<std::uint64_t>(p));
    double x = opts.x0;
    double drift_integral = 0.0, noise_integral = 0.0, penalty = 0.0, ddpsi_sq = 0.0;
    int next_checkpoint = 0;
    auto* traj_x = opts.record_trajectories ? &batch.trajectories_x[static_cast<std::size_t>(p)]
                                            : nullptr;
    auto* traj_u = opts.record_trajectories ? &batch.trajectories_u[static_cast<std::size_t>(p)]
                                            : nullptr;
    for (std::size_t j = 0; j < n_times; ++j) {
      const int cp = tables.checkpoint[j];
      if (cp >= 0 && cp >= next_checkpoint) {
        for (int b = next_checkpoint; b <= cp; ++b) {
          batch.u_at_checkpoints(b, p) =
              sample_even_grid(sol.dpsi[static_cast<std::size_t>(b)], sol.grid, x, true);
          batch.ddpsi_at_checkpoints(b, p) =
              sample_even_grid(cp_ddpsi[static_cast<std::size_t>(b)], sol.grid, x, false);
        }
        next_checkpoint = cp + 1;
      }
      if (j + 1 == n_times) break;

      const double dtau = tables.tau[j + 1] - tables.tau[j];
      if (dtau <= 0.0) continue;
      double u = 0.0;
      if (opts.control == ControlKind::optimal)
        u = sample_even_grid(tables.dpsi[j], sol.grid, x, true);
      else if (opts.control == ControlKind::custom)
        u = opts.custom_control(tables.s[j], x);
      const double dd = sample_even_grid(tables.ddpsi[j], sol.grid, x, false);

      if (traj_x) {
        traj_x->push_back(x);
        traj_u->push_back(u);
      }

      const double g = gamma > 0.0 ? rng.normal(j) : 0.0;
      const double drift = gamma * tables.alpha[j] * u * dtau;
      const double noise = std::sqrt(gamma * dtau) * g;
      drift_integral += drift;
      noise_integral += noise;
      penalty += 0.5 * gamma * tables.alpha[j] * u * u * dtau;
      ddpsi_sq += gamma * tables.alpha[j] * dd * dd * dtau;
      x += drift + noise;
    }
    batch.x_final[p] = x;
    batch.ddpsi_sq_integral[p] = ddpsi_sq;
    batch.objective[p] = log_cosh(opts.x0 + drift_integral + noise_integral) - penalty;
  };

  int n_threads = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, 16);
  if (n_threads <= 1) {
    for (int p = 0; p < opts.n_paths; ++p) run_path(p);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        constexpr int kBlock = 256;
        for (int start = next.fetch_add(kBlock); start < opts.n_paths;
             start = next.fetch_add(kBlock))
          for (int p = start; p < std::min(start + kBlock, opts.n_paths); ++p) run_path(p);
      });
    for (auto& th : pool) th.join();
  }
  return batch;
}

MeanSe variational_objective(const PathBatch& batch) { return mean_se(batch.objective); }

MartingaleReport martingale_check(const PathBatch& batch, const LevelSolution& sol) {
  MartingaleReport rep;
  const TiltedValues tv = expected_u_squared(sol);
  const int n_cp = static_cast<int>(batch.checkpoints.size());
  for (int b = 0; b < n_cp; ++b) {
    MartingaleCheckpoint cp;
    cp.q = batch.checkpoints[static_cast<std::size_t>(b)];
    cp.u_mean = mean_se(batch.u_at_checkpoints.row(b).transpose());
    cp.u_sq = mean_se(batch.u_at_checkpoints.row(b).square().transpose());
    cp.eu2_cascade = tv.eu2[static_cast<std::size_t>(b)];
    cp.u_mean_ok = std::fabs(cp.u_mean.mean) <= 3.0 * cp.u_mean.se + 1e-12;
    cp.u_sq_ok = std::fabs(cp.u_sq.mean - cp.eu2_cascade) <= 3.0 * cp.u_sq.se + 1e-4;
    rep.checkpoints.push_back(cp);
  }
  // Ito identity for ddpsi between the first and last checkpoint:
  // E[ddpsi(1,X_1) - ddpsi(0,x0)] = -E[gamma int alpha zeta ddpsi^2 ds].
  Eigen::ArrayXd gap = batch.ddpsi_at_checkpoints.row(n_cp - 1).transpose() -
                       batch.ddpsi_at_checkpoints.row(0).transpose() +
                       batch.ddpsi_sq_integral;
  rep.ito_gap = mean_se(gap);
  // Discretization allowance on top of the Monte Carlo band: the Riemann
  // sum of the quadratic variation carries O(dt) bias.
  const double dt_allowance =
      5.0 * batch.gamma * batch.gamma / static_cast<double>(batch.time.size());
  rep.ito_ok = std::fabs(rep.ito_gap.mean) <= 3.0 * rep.ito_gap.se + dt_allowance + 1e-12;
  rep.pass = rep.ito_ok;
  for (const auto& cp : rep.checkpoints) rep.pass = rep.pass && cp.u_mean_ok && cp.u_sq_ok;
  return rep;
}

}  // namespace parisi
