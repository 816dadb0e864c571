#include "parisi/parisi_min.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "parisi/errors.hpp"
#include "parisi/nelder_mead.hpp"
#include "parisi/rng.hpp"

namespace parisi {

int param_count(int k) { return (k + 1) + (k >= 2 ? k : 0); }

OrderParameter params_to_op(int k, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != param_count(k))
    throw InvalidParameter("parisi_min: parameter vector length mismatch");
  // q_j = (sum_{i<=j} theta_i^2) / (sum of all k+1 q-increments); the extra
  // increment is the headroom up to 1. Same construction for the k-1 free
  // masses with k increments.
  std::vector<double> q(static_cast<std::size_t>(k));
  double total = 0.0;
  for (int i = 0; i <= k; ++i) total += params[static_cast<std::size_t>(i)] *
                                        params[static_cast<std::size_t>(i)];
  if (total <= 0.0) total = 1.0;  // degenerate direction: everything collapses to 0
  double acc = 0.0;
  for (int j = 0; j < k; ++j) {
    acc += params[static_cast<std::size_t>(j)] * params[static_cast<std::size_t>(j)];
    q[static_cast<std::size_t>(j)] = std::min(acc / total, 1.0);
  }
  std::vector<double> m(static_cast<std::size_t>(std::max(k - 1, 0)));
  if (k >= 2) {
    double mtotal = 0.0;
    for (int i = 0; i < k; ++i) {
      const double t = params[static_cast<std::size_t>(k + 1 + i)];
      mtotal += t * t;
    }
    if (mtotal <= 0.0) mtotal = 1.0;
    double macc = 0.0;
    for (int j = 0; j < k - 1; ++j) {
      const double t = params[static_cast<std::size_t>(k + 1 + j)];
      macc += t * t;
      m[static_cast<std::size_t>(j)] = std::min(macc / mtotal, 1.0);
    }
  }
  return OrderParameter(k, std::move(q), std::move(m));
}

std::vector<double> op_to_params(const OrderParameter& op, int k) {
  if (op.k() > k)
    throw InvalidParameter("parisi_min: order parameter has more atoms than k slots");
  // Pad with zero-mass atoms stacked on the last position so the vector has
  // exactly k q-slots; normalization removes them again on decode.
  std::vector<double> q, mcum;
  for (int l = 0; l < op.k(); ++l) {
    q.push_back(op.atom(l));
    mcum.push_back(op.cumulative(l));
  }
  while (static_cast<int>(q.size()) < k) {
    q.push_back(q.back());
    mcum.push_back(1.0);
  }
  std::vector<double> params(static_cast<std::size_t>(param_count(k)), 0.0);
  double prev = 0.0;
  for (int j = 0; j < k; ++j) {
    params[static_cast<std::size_t>(j)] = std::sqrt(std::max(0.0, q[static_cast<std::size_t>(j)] - prev));
    prev = q[static_cast<std::size_t>(j)];
  }
  params[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, 1.0 - prev));
  if (k >= 2) {
    prev = 0.0;
    for (int j = 0; j < k - 1; ++j) {
      params[static_cast<std::size_t>(k + 1 + j)] =
          std::sqrt(std::max(0.0, mcum[static_cast<std::size_t>(j)] - prev));
      prev = mcum[static_cast<std::size_t>(j)];
    }
    params[static_cast<std::size_t>(2 * k)] = std::sqrt(std::max(0.0, 1.0 - prev));
  }
  return params;
}

double overlap_moment(const OrderParameter& op, const Mixture& mix) {
  double acc = 0.0;
  for (int l = 0; l < op.k(); ++l) acc += op.mass(l) * mix.xi(op.atom(l));
  return acc;
}

namespace {

GridSpec default_search_grid(const Mixture& mix, double gamma) {
  GridSpec g = GridSpec::for_model(mix, gamma);
  g.spacing = g.half_width / 512.0;
  g.quad_nodes = 40;
  return g;
}

struct StartPoint {
  std::vector<double> params;
};

std::vector<StartPoint> make_starts(const Mixture& mix, int k, const MinimizeOptions& opts) {
  std::vector<StartPoint> starts;
  const int n_starts = std::max(2, opts.starts);
  starts.reserve(static_cast<std::size_t>(n_starts));

  if (opts.warm_start) starts.push_back({op_to_params(*opts.warm_start, k)});

  starts.push_back({op_to_params(OrderParameter::replica_symmetric(), k)});

  {  // equispaced ladder
    std::vector<double> q(static_cast<std::size_t>(k)), m(static_cast<std::size_t>(std::max(k - 1, 0)));
    for (int j = 0; j < k; ++j) q[static_cast<std::size_t>(j)] = (j + 1.0) / (k + 1.0);
    for (int j = 0; j + 1 < k; ++j) m[static_cast<std::size_t>(j)] = (j + 1.0) / k;
    starts.push_back({op_to_params(OrderParameter(k, q, m), k)});
  }

  CounterRng rng(opts.seed, 0xa17a);
  std::uint64_t ctr = 0;
  while (static_cast<int>(starts.size()) < n_starts) {
    if (opts.warm_start && starts.size() < 4) {
      // jittered copies of the warm start
      std::vector<double> p = starts[0].params;
      for (double& x : p) x += 0.05 * rng.normal(ctr++);
      starts.push_back({std::move(p)});
      continue;
    }
    std::vector<double> q(static_cast<std::size_t>(k)), m(static_cast<std::size_t>(std::max(k - 1, 0)));
    for (double& x : q) x = rng.uniform(ctr++);
    for (double& x : m) x = rng.uniform(ctr++);
    std::sort(q.begin(), q.end());
    std::sort(m.begin(), m.end());
    starts.push_back({op_to_params(OrderParameter(k, q, m), k)});
  }
  (void)mix;
  return starts;
}

}  // namespace

ParisiMeasure minimize(const Mixture& mix, double gamma, int k, const MinimizeOptions& opts) {
  if (k > 8) throw UnsupportedOrder("parisi_min: k above 8 is not supported");
  if (!(gamma > 0.0)) throw InvalidTemperature("parisi_min: gamma must be positive");
  if (k < 1) k = 1;

  const GridSpec search = opts.search_grid ? *opts.search_grid : default_search_grid(mix, gamma);
  const GridSpec report = opts.final_grid ? *opts.final_grid : GridSpec::for_model(mix, gamma);

  const auto objective = [&](const std::vector<double>& params) {
    return p_hat_value(mix, params_to_op(k, params), gamma, search);
  };

  const auto starts = make_starts(mix, k, opts);
  std::vector<NelderMeadResult> results(starts.size());

  NelderMeadOptions nm;
  nm.max_iter = opts.nm_max_iter;

  int n_threads = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, static_cast<int>(starts.size()));
  if (n_threads <= 1) {
    for (std::size_t s = 0; s < starts.size(); ++s)
      results[s] = nelder_mead(objective, starts[s].params, nm);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t s = next.fetch_add(1); s < starts.size(); s = next.fetch_add(1))
          results[s] = nelder_mead(objective, starts[s].params, nm);
      });
    for (auto& th : pool) th.join();
  }

  // Deterministic merge: best value, ties broken by smaller int alpha xi'.
  std::size_t best = 0;
  double best_tie = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < results.size(); ++s) {
    const double tie = alpha_moments(params_to_op(k, results[s].x), mix).int_alpha_xi_prime;
    const bool better = results[s].fmin < results[best].fmin - 1e-9 ||
                        (results[s].fmin < results[best].fmin + 1e-9 && tie < best_tie);
    if (s == 0 || better) {
      best = s;
      best_tie = tie;
    }
  }

  // Polish cycles run against the reporting grid so the returned value is
  // stationary for the discretization it is quoted on (the cheap search
  // grid's noise floor would otherwise dominate near-flat landscapes).
  const auto report_objective = [&](const std::vector<double>& params) {
    return p_hat_value(mix, params_to_op(k, params), gamma, report);
  };
  NelderMeadResult incumbent = results[best];
  incumbent.fmin = report_objective(incumbent.x);
  bool converged = false;
  for (int cycle = 0; cycle < opts.max_restart_cycles; ++cycle) {
    NelderMeadOptions polish = nm;
    polish.step = 0.02;
    NelderMeadResult r = nelder_mead(report_objective, incumbent.x, polish);
    const double gain = incumbent.fmin - r.fmin;
    if (r.fmin < incumbent.fmin) incumbent = r;
    if (gain < opts.improve_tol) {
      converged = true;
      break;
    }
  }

  const OrderParameter op = params_to_op(k, incumbent.x);
  const Evaluation ev = evaluate(mix, op, gamma, report);
  ParisiMeasure pm{op, gamma, ev.p_hat, stationarity_residual(ev, op),
                   overlap_moment(op, mix), ev.moments.int_alpha_xi_prime, converged};
  return pm;
}

std::vector<ScanRow> temperature_scan(const Mixture& mix, const std::vector<double>& gammas,
                                      int k, const MinimizeOptions& opts) {
  for (std::size_t i = 1; i < gammas.size(); ++i)
    if (!(gammas[i] > gammas[i - 1]))
      throw InvalidParameter("parisi_min: gamma grid must be strictly increasing");

  std::vector<ScanRow> rows;
  rows.reserve(gammas.size());
  MinimizeOptions local = opts;
  for (double gamma : gammas) {
    const ParisiMeasure pm = minimize(mix, gamma, k, local);

    // Local centered difference of the minimized curve.
    MinimizeOptions fd = local;
    fd.warm_start = pm.op;
    fd.starts = 3;
    fd.max_restart_cycles = 2;
    const double dg = 1e-3 * std::max(1.0, gamma);
    const double up = minimize(mix, gamma + dg, k, fd).value;
    const double dn = minimize(mix, std::max(gamma - dg, 1e-12), k, fd).value;
    const double denom = gamma + dg - std::max(gamma - dg, 1e-12);

    ScanRow row;
    row.gamma = gamma;
    row.beta = std::sqrt(gamma);
    row.value = pm.value;
    row.dvalue_fd = (up - dn) / denom;
    row.int_alpha_xiprime = pm.int_alpha_xiprime;
    row.overlap_moment = pm.overlap_moment;
    row.max_residual = 0.0;
    for (double r : pm.residuals) row.max_residual = std::max(row.max_residual, std::fabs(r));
    row.converged = pm.converged;
    rows.push_back(row);

    local.warm_start = pm.op;  // continuity of beta -> alpha_P
  }
  return rows;
}

}  // namespace parisi
