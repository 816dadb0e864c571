#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parisi/cascade.hpp"
#include "parisi/errors.hpp"
#include "parisi/gauss_hermite.hpp"
#include "parisi/oracles.hpp"
#include "parisi/rng.hpp"

using namespace parisi;

namespace {

OrderParameter random_op(CounterRng& rng, std::uint64_t& ctr, int kmax = 3) {
  const int k = 1 + static_cast<int>(rng.uniform(ctr++) * kmax);
  std::vector<double> q(static_cast<std::size_t>(k)), m(static_cast<std::size_t>(k - 1));
  for (double& v : q) v = rng.uniform(ctr++);
  for (double& v : m) v = rng.uniform(ctr++);
  std::sort(q.begin(), q.end());
  std::sort(m.begin(), m.end());
  return OrderParameter(k, q, m);
}

}  // namespace

TEST_CASE("Gauss-Hermite rule matches the Newton-iteration oracle") {
  for (int n : {8, 16, 40, 64}) {
    const GaussHermite& gh = gauss_hermite(n);
    const oracle::Quadrature oq = oracle::hermite_rule(n);
    CHECK(std::fabs(gh.weights.sum() - 1.0) < 1e-14);
    for (int i = 0; i < n; ++i) {
      CHECK(gh.nodes[i] == doctest::Approx(oq.nodes[static_cast<std::size_t>(i)]).epsilon(1e-11));
      CHECK(gh.nodes[i] == -gh.nodes[n - 1 - i]);  // exact antisymmetry
    }
    // Exactness on a few even moments of N(0, 1/2): E y^2 = 1/4 etc.
    double m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
      m2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
      m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
    }
    CHECK(m2 == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(0.75).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_hermite(7), InvalidParameter);
  CHECK_THROWS_AS(gauss_hermite(6), InvalidParameter);
}

TEST_CASE("grid defaults and validation") {
  const Mixture sk = Mixture::sk();
  const GridSpec g = GridSpec::for_model(sk, 1.0);
  CHECK(g.half_width == doctest::Approx(12.0));
  CHECK(g.points() == 2049);
  CHECK(g.x(g.mid()) == 0.0);
  CHECK_NOTHROW(g.validate());

  GridSpec bad = g;
  bad.spacing = 0.0101;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = g;
  bad.half_width = 4.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = g;
  bad.quad_nodes = 15;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
}

TEST_CASE("gamma = 0 keeps every level at log cosh") {
  const Mixture sk = Mixture::sk();
  const LevelSolution sol = solve_cascade(sk, OrderParameter(2, {0.3, 0.7}, {0.4}), 0.0);
  CHECK(sol.phi00() == 0.0);
  // off-grid reads carry the O(h^4) interpolation error
  for (int l = 0; l < sol.levels(); ++l) {
    const auto vs = phi_value(sol, l, 1.3);
    CHECK(vs.value == doctest::Approx(std::log(std::cosh(1.3))).epsilon(1e-8));
    CHECK(vs.slope == doctest::Approx(std::tanh(1.3)).epsilon(1e-8));
  }
}

TEST_CASE("single Hopf-Cole step closed form: Phi(0,0) = gamma/2 for SK alpha==1") {
  const Mixture sk = Mixture::sk();
  for (double gamma : {0.3, 1.0, 2.0, 5.0}) {
    const LevelSolution sol = solve_cascade(sk, OrderParameter::replica_symmetric(), gamma);
    CHECK(sol.phi00() == doctest::Approx(0.5 * gamma).epsilon(1e-9));
  }
}

TEST_CASE("errors: negative gamma, narrow grid") {
  const Mixture sk = Mixture::sk();
  const OrderParameter rs = OrderParameter::replica_symmetric();
  CHECK_THROWS_AS(solve_cascade(sk, rs, -0.5), InvalidTemperature);
  GridSpec narrow = GridSpec::for_model(sk, 9.0);
  narrow.half_width = 16.0;  // 6 sigma = 18
  narrow.spacing = 16.0 / 1024.0;
  CHECK_THROWS_AS(solve_cascade(sk, rs, 9.0, narrow), GridTooNarrow);
}

TEST_CASE("terminal level and evenness of phi_value") {
  const Mixture sk = Mixture::sk();
  const LevelSolution sol = solve_cascade(sk, OrderParameter(2, {0.3, 0.7}, {0.4}), 2.0);
  const int top = sol.levels() - 1;

  const auto vs0 = phi_value(sol, top, 0.0);
  CHECK(vs0.value == 0.0);
  CHECK(vs0.slope == 0.0);

  for (double x : {0.17, 1.0, 3.9, 7.7, 30.0}) {
    for (int l = 0; l < sol.levels(); ++l) {
      const auto plus = phi_value(sol, l, x);
      const auto minus = phi_value(sol, l, -x);
      CHECK(plus.value == minus.value);    // exact by reflection
      CHECK(plus.slope == -minus.slope);
      CHECK(std::fabs(plus.slope) <= 1.0);
    }
  }
  CHECK_THROWS_AS(phi_value(sol, 99, 0.0), InvalidParameter);
}

TEST_CASE("phi_value slope matches a finite difference of the value") {
  const Mixture sk = Mixture::sk();
  const LevelSolution sol = solve_cascade(sk, OrderParameter(2, {0.3, 0.7}, {0.4}), 2.0);
  const double h = 1e-4;
  for (double x : {0.5, 1.5, 3.0}) {
    const auto vs = phi_value(sol, 0, x);
    const double fd =
        (phi_value(sol, 0, x + h).value - phi_value(sol, 0, x - h).value) / (2.0 * h);
    CHECK(vs.slope == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("level invariants: convexity, |slope| <= 1, variances") {
  const Mixture mix = Mixture::from_squared({0.3, 0.15, 0.05});
  const OrderParameter op(3, {0.25, 0.5, 0.8}, {0.2, 0.6});
  const double gamma = 3.0;
  const LevelSolution sol = solve_cascade(mix, op, gamma);

  double vsum = 0.0;
  for (double v : sol.v) {
    CHECK(v >= 0.0);
    vsum += v;
  }
  CHECK(vsum == doctest::Approx(mix.xi_prime(1.0)).epsilon(1e-12));

  for (int l = 0; l < sol.levels(); ++l) {
    const auto& psi = sol.psi[static_cast<std::size_t>(l)];
    const auto& dpsi = sol.dpsi[static_cast<std::size_t>(l)];
    for (int j = 0; j < sol.grid.points(); ++j) CHECK(std::fabs(dpsi[j]) <= 1.0);
    for (int j = 1; j + 1 < sol.grid.points(); ++j) {
      const double d2 = psi[j - 1] - 2.0 * psi[j] + psi[j + 1];
      CHECK(d2 >= -1e-9);  // convex along the grid
    }
    // evenness on grid nodes is exact by construction
    for (int j = 0; j < sol.grid.points(); ++j) {
      CHECK(psi[j] == psi[sol.grid.points() - 1 - j]);
      CHECK(dpsi[j] == -dpsi[sol.grid.points() - 1 - j]);
    }
  }
}

TEST_CASE("tilted expectation: normalization, b=0 and closed forms") {
  const Mixture sk = Mixture::sk();
  CounterRng rng(123, 5);
  std::uint64_t ctr = 0;

  SUBCASE("f == 1 integrates to 1 for random instances") {
    for (int rep = 0; rep < 8; ++rep) {
      const OrderParameter op = random_op(rng, ctr);
      const double gamma = 0.2 + 4.0 * rng.uniform(ctr++);
      const LevelSolution sol = solve_cascade(sk, op, gamma);
      for (int b = 0; b < sol.levels(); ++b) {
        const double one = tilted_expectation(sol, [](double) { return 1.0; }, b);
        CHECK(one == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }

  SUBCASE("b = 0 evaluates f at the origin") {
    const LevelSolution sol = solve_cascade(sk, OrderParameter(2, {0.3, 0.7}, {0.4}), 2.0);
    const double got = tilted_expectation(sol, [](double y) { return std::cos(y); }, 0);
    CHECK(got == doctest::Approx(1.0).epsilon(1e-14));  // cos(0)
  }

  SUBCASE("non-finite integrand rejected") {
    const LevelSolution sol = solve_cascade(sk, OrderParameter::replica_symmetric(), 1.0);
    CHECK_THROWS_AS(
        tilted_expectation(sol, [](double y) { return 1.0 / y; }, 1),
        InvalidIntegrand);
  }

  SUBCASE("tanh^2 at the terminal level matches the tensor-product oracle") {
    const OrderParameter op(2, {0.3, 0.7}, {0.4});
    const LevelSolution sol = solve_cascade(sk, op, 2.0);
    const auto f = [](double y) { return std::tanh(y) * std::tanh(y); };
    const double fast = tilted_expectation(sol, f, sol.levels() - 1);
    const double slow = oracle::nested_tilted(sk, op, 2.0, f, sol.levels() - 1, 0.0, 24);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-7));
  }
}

TEST_CASE("expected u^2: trivial values and the 1-D closed reduction") {
  const Mixture sk = Mixture::sk();

  SUBCASE("gamma = 0 gives all zeros") {
    const LevelSolution sol = solve_cascade(sk, OrderParameter(2, {0.3, 0.7}, {0.4}), 0.0);
    for (double e : expected_u_squared(sol).eu2) CHECK(e == 0.0);
  }

  SUBCASE("eu2[0] vanishes by evenness") {
    const LevelSolution sol = solve_cascade(sk, OrderParameter(2, {0.3, 0.7}, {0.4}), 2.0);
    CHECK(expected_u_squared(sol).eu2[0] == 0.0);
  }

  SUBCASE("SK alpha==1, gamma=1: terminal value is E[tanh(z)sinh(z)]/sqrt(e)") {
    const LevelSolution sol = solve_cascade(sk, OrderParameter::replica_symmetric(), 1.0);
    const TiltedValues tv = expected_u_squared(sol);
    const double expected =
        oracle::gauss_expect([](double z) { return std::tanh(z) * std::sinh(z); }, 1.0) /
        std::exp(0.5);
    CHECK(tv.eu2.back() == doctest::Approx(expected).epsilon(1e-8));
  }

  SUBCASE("eu2 nondecreasing across levels (martingale growth)") {
    CounterRng rng(77, 7);
    std::uint64_t ctr = 0;
    for (int rep = 0; rep < 5; ++rep) {
      const OrderParameter op = random_op(rng, ctr);
      const double gamma = 0.5 + 3.0 * rng.uniform(ctr++);
      const TiltedValues tv = expected_u_squared(solve_cascade(sk, op, gamma));
      for (std::size_t b = 0; b + 1 < tv.eu2.size(); ++b) {
        CHECK(tv.eu2[b] <= tv.eu2[b + 1] + 1e-9);
        CHECK(tv.eu2[b] >= 0.0);
        CHECK(tv.eu2[b] <= 1.0);
      }
    }
  }
}

TEST_CASE("cascade equals literal nested quadrature (no grid, no DP)") {
  struct Case {
    Mixture mix;
    OrderParameter op;
    double gamma;
  };
  const std::vector<Case> cases = {
      {Mixture::sk(), OrderParameter(2, {0.3, 0.7}, {0.4}), 2.0},
      {Mixture::sk(), OrderParameter(1, {0.5}, {}), 1.5},
      {Mixture::from_squared({0.25, 0.15}), OrderParameter(2, {0.2, 0.6}, {0.3}), 2.5},
  };
  for (const auto& cs : cases) {
    const LevelSolution sol = solve_cascade(cs.mix, cs.op, cs.gamma);
    const double slow = oracle::nested_phi0(cs.mix, cs.op, cs.gamma, 32);
    CHECK(sol.phi00() == doctest::Approx(slow).epsilon(1e-7));
  }
}

TEST_CASE("grid refinement changes Phi(0,0) below 1e-8") {
  const Mixture sk = Mixture::sk();
  const OrderParameter op(2, {0.3, 0.7}, {0.4});
  for (double gamma : {1.0, 2.0}) {
    GridSpec coarse = GridSpec::for_model(sk, gamma);
    GridSpec fine = coarse;
    fine.spacing = coarse.spacing / 2.0;
    fine.quad_nodes = coarse.quad_nodes * 2;
    const double a = solve_cascade(sk, op, gamma, coarse).phi00();
    const double b = solve_cascade(sk, op, gamma, fine).phi00();
    CHECK(std::fabs(a - b) < 1e-8);
  }
}

TEST_CASE("scaled-derivative comparison and tilted monotonicity in x") {
  const Mixture sk = Mixture::sk();
  const OrderParameter op(2, {0.3, 0.7}, {0.4});
  const double g1 = 1.0, g2 = 2.5;
  const LevelSolution s1 = solve_cascade(sk, op, g1);
  const LevelSolution s2 = solve_cascade(sk, op, g2);

  // dPsi_{g1}(q_b, sqrt(g1) x) <= dPsi_{g2}(q_b, sqrt(g2) x) for x >= 0.
  for (int b = 0; b < s1.levels(); ++b) {
    for (int i = 0; i <= 40; ++i) {
      const double x = 0.2 * i;
      const double d1 = phi_value(s1, b, std::sqrt(g1) * x).slope;
      const double d2 = phi_value(s2, b, std::sqrt(g2) * x).slope;
      CHECK(d1 <= d2 + 1e-8);
    }
  }
}

TEST_CASE("FKG-type spot check for the Gaussian tilt") {
  // f1 even nondecreasing (y^2), f2 odd nondecreasing (tanh), D(y) =
  // cosh(y)/E cosh(x+z): covariance under the tilt is nonnegative.
  for (double x : {0.0, 0.5, 1.0, 2.0}) {
    for (double var : {0.25, 1.0, 4.0}) {
      const auto ecosh =
          oracle::gauss_expect([&](double z) { return std::cosh(x + z); }, var);
      const auto tilted = [&](auto f) {
        return oracle::gauss_expect(
                   [&](double z) { return f(x + z) * std::cosh(x + z); }, var) /
               ecosh;
      };
      const double joint = tilted([](double y) { return y * y * std::tanh(y); });
      const double f1 = tilted([](double y) { return y * y; });
      const double f2 = tilted([](double y) { return std::tanh(y); });
      CHECK(joint >= f1 * f2 - 1e-12);
    }
  }
}
