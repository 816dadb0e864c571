#include "parisi/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "parisi/errors.hpp"

namespace parisi {
namespace oracle {

namespace {

// Orthonormalized Hermite polynomials p_n and p_{n-1} (weight e^{-x^2});
// the recurrence stays well within double range for any practical n.
void hermite_pair(int n, double x, double& pn, double& pn1) {
  double p0 = std::pow(M_PI, -0.25);
  double p1 = std::sqrt(2.0) * x * p0;
  if (n == 0) {
    pn = p0;
    pn1 = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 = x * std::sqrt(2.0 / (k + 1.0)) * p1 - std::sqrt(k / (k + 1.0)) * p0;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pn1 = p0;
}

double stable_log_cosh(double x) {
  const double a = std::fabs(x);
  return a - M_LN2 + std::log1p(std::exp(-2.0 * a));
}

}  // namespace

Quadrature hermite_rule(int n) {
  if (n < 2) throw InvalidParameter("oracle: need at least 2 nodes");
  Quadrature q;
  q.nodes.assign(static_cast<std::size_t>(n), 0.0);
  q.weights.assign(static_cast<std::size_t>(n), 0.0);

  // Bracket the positive roots of p_n by a sign scan (spacing well below
  // the minimal zero gap ~ pi/sqrt(2n)), then bisect each bracket.
  const double xmax = std::sqrt(2.0 * n + 1.0) + 1.0;
  const int scan = 16 * n;
  std::vector<double> pos;  // ascending positive-side roots
  double prev_x = xmax * 1e-9, prev_p, unused;
  hermite_pair(n, prev_x, prev_p, unused);
  for (int i = 1; i <= scan; ++i) {
    const double x = xmax * i / scan;
    double p;
    hermite_pair(n, x, p, unused);
    if ((prev_p < 0.0) != (p < 0.0)) {
      double lo = prev_x, hi = x, plo = prev_p;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        double pm;
        hermite_pair(n, mid, pm, unused);
        if ((plo < 0.0) != (pm < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
          plo = pm;
        }
      }
      pos.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_p = p;
  }
  if (static_cast<int>(pos.size()) != n / 2)
    throw InvalidParameter("oracle: hermite root scan failed");
  for (int i = 0; i < n / 2; ++i) {
    const double root = pos[static_cast<std::size_t>(n / 2 - 1 - i)];
    q.nodes[static_cast<std::size_t>(n - 1 - i)] = root;
    q.nodes[static_cast<std::size_t>(i)] = -root;
  }
  if (n % 2 == 1) q.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double pn, pn1;
    hermite_pair(n, q.nodes[static_cast<std::size_t>(i)], pn, pn1);
    const double w = 1.0 / (pn1 * pn1);  // up to a constant, normalized below
    q.weights[static_cast<std::size_t>(i)] = w;
    total += w;
  }
  for (double& w : q.weights) w /= total;
  for (int i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (q.weights[static_cast<std::size_t>(i)] +
                            q.weights[static_cast<std::size_t>(n - 1 - i)]);
    q.weights[static_cast<std::size_t>(i)] = w;
    q.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return q;
}

namespace {

struct Cascade {
  std::vector<double> q, m, v;
  double gamma = 0;
  Quadrature rule;

  double psi(int level, double x) const {
    const int top = static_cast<int>(q.size()) - 1;
    if (level == top) return stable_log_cosh(x);
    const double mm = m[static_cast<std::size_t>(level)];
    const double vv = v[static_cast<std::size_t>(level)];
    if (vv <= 0.0 || gamma == 0.0) return psi(level + 1, x);
    const double scale = std::sqrt(2.0 * gamma * vv);
    const int n = static_cast<int>(rule.nodes.size());
    if (mm > 1e-8) {
      double mx = -1e308;
      std::vector<double> vals(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        vals[static_cast<std::size_t>(i)] =
            mm * psi(level + 1, x + scale * rule.nodes[static_cast<std::size_t>(i)]);
        mx = std::max(mx, vals[static_cast<std::size_t>(i)]);
      }
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += rule.weights[static_cast<std::size_t>(i)] *
               std::exp(vals[static_cast<std::size_t>(i)] - mx);
      return (mx + std::log(acc)) / mm;
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += rule.weights[static_cast<std::size_t>(i)] *
             psi(level + 1, x + scale * rule.nodes[static_cast<std::size_t>(i)]);
    return acc;
  }

  double dpsi(int level, double x) const {
    // Centered difference; accuracy is limited but only used for integrands.
    const double h = 1e-5;
    return (psi(level, x + h) - psi(level, x - h)) / (2.0 * h);
  }
};

Cascade make_cascade(const Mixture& mix, const OrderParameter& op, double gamma, int n) {
  Cascade c;
  c.q = op.level_boundaries();
  c.m = op.level_values();
  c.gamma = gamma;
  c.rule = hermite_rule(n);
  c.v.resize(c.q.size() - 1);
  for (std::size_t l = 0; l + 1 < c.q.size(); ++l)
    c.v[l] = mix.xi_prime(c.q[l + 1]) - mix.xi_prime(c.q[l]);
  return c;
}

}  // namespace

double nested_psi(const Mixture& mix, const OrderParameter& op, double gamma, int level,
                  double x, int n) {
  return make_cascade(mix, op, gamma, n).psi(level, x);
}

double nested_phi0(const Mixture& mix, const OrderParameter& op, double gamma, int n) {
  return make_cascade(mix, op, gamma, n).psi(0, 0.0);
}

double nested_tilted(const Mixture& mix, const OrderParameter& op, double gamma,
                     const std::function<double(double)>& f, int b, double x, int n) {
  const Cascade c = make_cascade(mix, op, gamma, n);
  if (b < 0 || b >= static_cast<int>(c.q.size()))
    throw InvalidParameter("oracle: tilt level out of range");
  const double sqrt_gamma = std::sqrt(gamma);

  // DFS over node combinations (z_0, ..., z_{b-1}); `sum_z` carries the
  // partial sum of the raw increments, the state is sqrt(gamma)(x + sum_z).
  std::function<double(int, double, double, double)> dfs =
      [&](int level, double sum_z, double weight, double tilt) -> double {
    if (level == b) return weight * f(sqrt_gamma * (x + sum_z)) * std::exp(tilt);
    const double vv = c.v[static_cast<std::size_t>(level)];
    const double mm = c.m[static_cast<std::size_t>(level)];
    if (vv <= 0.0 || gamma == 0.0) return dfs(level + 1, sum_z, weight, tilt);
    const double scale = std::sqrt(2.0 * vv);
    const double psi_here = c.psi(level, sqrt_gamma * (x + sum_z));
    double acc = 0.0;
    const int nn = static_cast<int>(c.rule.nodes.size());
    for (int i = 0; i < nn; ++i) {
      const double z = scale * c.rule.nodes[static_cast<std::size_t>(i)];
      const double eta_next = sqrt_gamma * (x + sum_z + z);
      const double dt = mm * (c.psi(level + 1, eta_next) - psi_here);
      acc += dfs(level + 1, sum_z + z, weight * c.rule.weights[static_cast<std::size_t>(i)],
                 tilt + dt);
    }
    return acc;
  };
  return dfs(0, 0.0, 1.0, 0.0);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
          int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
    const double flm = f(lmid), frm = f(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (depth > 40 || std::fabs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, depth + 1) +
           rec(mid, hi, fmid, frm, fhi, right, depth + 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, 0);
}

double gauss_expect(const std::function<double(double)>& g, double variance, int n) {
  if (variance <= 0.0) return g(0.0);
  const Quadrature q = hermite_rule(n);
  const double scale = std::sqrt(2.0 * variance);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i)
    acc += q.weights[i] * g(scale * q.nodes[i]);
  return acc;
}

}  // namespace parisi::oracle
}  // namespace parisi
