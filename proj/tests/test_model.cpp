#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parisi/errors.hpp"
#include "parisi/oracles.hpp"
#include "parisi/order_parameter.hpp"
#include "parisi/rng.hpp"

using namespace parisi;

TEST_CASE("SK normalization: xi(t) = t^2/2") {
  const Mixture sk = Mixture::sk();
  CHECK(sk.xi(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sk.xi_prime(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sk.xi_second(0.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sk.xi(0.0) == 0.0);
  CHECK(sk.xi_prime(0.0) == 0.0);
}

TEST_CASE("two-term mixture arithmetic") {
  const Mixture mix({1.0, 1.0});  // p = 2, 3
  CHECK(mix.xi(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mix.xi_prime(1.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(mix.xi_second(1.0) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("xi'(0) vanishes for any mixture") {
  const Mixture mix({0.3, 0.0, 0.5, 0.1});
  CHECK(mix.xi_prime(0.0) == 0.0);
  CHECK(mix.xi(0.0) == 0.0);
}

TEST_CASE("mixture validation") {
  CHECK_THROWS_AS(Mixture({}), InvalidMixture);
  CHECK_THROWS_AS(Mixture({0.0, 0.0}), InvalidMixture);
  CHECK_THROWS_AS(Mixture({std::nan("")}), InvalidMixture);
  CHECK_THROWS_AS(Mixture(std::vector<double>(64, 0.1)), InvalidMixture);  // p > 64
  CHECK_NOTHROW(Mixture(std::vector<double>(63, 0.1)));                    // p == 64
}

TEST_CASE("xi'' nonnegative and xi' nondecreasing on a dense grid") {
  const Mixture mix({0.5, 0.2, 0.0, 0.4});
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    CHECK(mix.xi_second(t) >= 0.0);
    CHECK(mix.xi_prime(t) >= prev);
    prev = mix.xi_prime(t);
  }
}

TEST_CASE("k=0 collapses to alpha == 1 with a unit atom at 0") {
  const OrderParameter op(0, {}, {});
  CHECK(op.is_replica_symmetric());
  CHECK(op.k() == 1);
  CHECK(op.atom(0) == 0.0);
  CHECK(op.mass(0) == 1.0);
  for (double s : {0.0, 0.4, 0.999, 1.0}) CHECK(op.alpha(s) == 1.0);
}

TEST_CASE("interior two-step order parameter") {
  const OrderParameter op(2, {0.3, 0.7}, {0.4});
  CHECK(op.k() == 2);
  CHECK(op.alpha(0.0) == 0.0);
  CHECK(op.alpha(0.3) == 0.4);
  CHECK(op.alpha(0.69) == 0.4);
  CHECK(op.alpha(0.7) == 1.0);
  CHECK(op.alpha(1.0) == 1.0);
  CHECK(op.mass(0) == doctest::Approx(0.4));
  CHECK(op.mass(1) == doctest::Approx(0.6));
}

TEST_CASE("rejection reports the first violated index") {
  try {
    OrderParameter op(2, {0.7, 0.3}, {0.4});
    FAIL("expected InvalidOrderParameter");
  } catch (const InvalidOrderParameter& e) {
    CHECK(e.index() == 0);
  }
  try {
    OrderParameter op(3, {0.1, 0.2, 0.3}, {0.8, 0.2});
    FAIL("expected InvalidOrderParameter");
  } catch (const InvalidOrderParameter& e) {
    CHECK(e.index() == 0);
  }
  CHECK_THROWS_AS(OrderParameter(1, {1.5}, {}), InvalidOrderParameter);
  CHECK_THROWS_AS(OrderParameter(2, {0.3, 0.7}, {-0.1}), InvalidOrderParameter);
  CHECK_THROWS_AS(OrderParameter(2, {0.3}, {0.4}), InvalidOrderParameter);
}

TEST_CASE("duplicate atoms merge and zero-mass atoms drop") {
  const OrderParameter dup(2, {0.5, 0.5}, {0.4});
  CHECK(dup.k() == 1);
  CHECK(dup.atom(0) == 0.5);
  CHECK(dup.mass(0) == 1.0);

  const OrderParameter zero_mass(3, {0.2, 0.5, 0.8}, {0.3, 0.3});
  CHECK(zero_mass.k() == 2);  // the middle atom carries no mass
  CHECK(zero_mass.atom(1) == 0.8);
}

TEST_CASE("alpha evaluation is right-continuous nondecreasing with alpha(1)=1") {
  CounterRng rng(99, 1);
  std::uint64_t ctr = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 1 + static_cast<int>(rng.uniform(ctr++) * 4);
    std::vector<double> q(static_cast<std::size_t>(k)), m(static_cast<std::size_t>(k - 1));
    for (double& v : q) v = rng.uniform(ctr++);
    for (double& v : m) v = rng.uniform(ctr++);
    std::sort(q.begin(), q.end());
    std::sort(m.begin(), m.end());
    const OrderParameter op(k, q, m);
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double s = i / 200.0;
      const double a = op.alpha(s);
      CHECK(a >= prev);
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
      prev = a;
    }
    CHECK(op.alpha(1.0) == 1.0);
    // right-continuity at each atom
    for (int l = 0; l < op.k(); ++l)
      CHECK(op.alpha(op.atom(l)) == doctest::Approx(op.cumulative(l)));
  }
}

TEST_CASE("alpha moments: closed forms against adaptive quadrature") {
  const Mixture sk = Mixture::sk();

  SUBCASE("alpha == 1") {
    const auto mo = alpha_moments(OrderParameter::replica_symmetric(), sk);
    CHECK(mo.int_alpha_xi_prime == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mo.int_alpha_s_xi2 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mo.int_xi_dalpha == 0.0);
    CHECK(mo.int_s_xiprime_dalpha == 0.0);
  }

  SUBCASE("two-step example") {
    const OrderParameter op(2, {0.3, 0.7}, {0.4});
    const auto mo = alpha_moments(op, sk);
    CHECK(mo.int_alpha_xi_prime == doctest::Approx(0.335).epsilon(1e-14));

    const auto quad = [&](auto integrand) {
      // integrate piecewise between the atoms so the integrand is smooth
      double acc = 0.0;
      const std::vector<double> cuts = {0.0, 0.3, 0.7, 1.0};
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += oracle::adaptive_simpson(integrand, cuts[i] + 1e-13, cuts[i + 1] - 1e-13, 1e-13);
      return acc;
    };
    const double axp = quad([&](double s) { return op.alpha(s) * sk.xi_prime(s); });
    const double asx2 = quad([&](double s) { return op.alpha(s) * s * sk.xi_second(s); });
    CHECK(mo.int_alpha_xi_prime == doctest::Approx(axp).epsilon(1e-10));
    CHECK(mo.int_alpha_s_xi2 == doctest::Approx(asx2).epsilon(1e-10));
    CHECK(mo.int_xi_dalpha == doctest::Approx(0.4 * sk.xi(0.3) + 0.6 * sk.xi(0.7)).epsilon(1e-14));
  }

  SUBCASE("mixed model cross-check") {
    const Mixture mix = Mixture::from_squared({0.3, 0.2, 0.1});
    const OrderParameter op(3, {0.2, 0.5, 0.9}, {0.25, 0.6});
    const auto mo = alpha_moments(op, mix);
    double acc = 0.0;
    const std::vector<double> cuts = {0.0, 0.2, 0.5, 0.9, 1.0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      acc += oracle::adaptive_simpson(
          [&](double s) { return op.alpha(s) * mix.xi_prime(s); }, cuts[i] + 1e-13,
          cuts[i + 1] - 1e-13, 1e-13);
    CHECK(mo.int_alpha_xi_prime == doctest::Approx(acc).epsilon(1e-10));
  }
}

TEST_CASE("moment identity holds for random instances") {
  CounterRng rng(7, 3);
  std::uint64_t ctr = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int pmax = 2 + static_cast<int>(rng.uniform(ctr++) * 4);
    std::vector<double> c2(static_cast<std::size_t>(pmax - 1));
    for (double& v : c2) v = rng.uniform(ctr++);
    const Mixture mix = Mixture::from_squared(c2);

    const int k = 1 + static_cast<int>(rng.uniform(ctr++) * 4);
    std::vector<double> q(static_cast<std::size_t>(k)), m(static_cast<std::size_t>(k - 1));
    for (double& v : q) v = rng.uniform(ctr++);
    for (double& v : m) v = rng.uniform(ctr++);
    std::sort(q.begin(), q.end());
    std::sort(m.begin(), m.end());
    const OrderParameter op(k, q, m);

    const auto mo = alpha_moments(op, mix);
    const double rhs = mix.xi_prime(1.0) - mo.int_alpha_xi_prime - mo.int_s_xiprime_dalpha;
    CHECK(mo.int_alpha_s_xi2 ==
          doctest::Approx(rhs).epsilon(1e-12).scale(std::max(1.0, std::fabs(rhs))));
  }
}

TEST_CASE("blend interpolates pointwise between two step functions") {
  const OrderParameter a(1, {0.2}, {});
  const OrderParameter b(2, {0.4, 0.8}, {0.5});
  const OrderParameter mid = blend(a, b, 0.25);
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9})
    CHECK(mid.alpha(s) == doctest::Approx(0.75 * a.alpha(s) + 0.25 * b.alpha(s)).epsilon(1e-15));
  CHECK(mid.alpha(1.0) == 1.0);
}
