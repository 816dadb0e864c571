#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parisi/errors.hpp"
#include "parisi/rem.hpp"

using namespace parisi;

TEST_CASE("closed-form branches") {
  CHECK(p_rem(2.0 * M_LN2).p_hat == doctest::Approx(2.0 * M_LN2).epsilon(1e-15));
  CHECK(p_rem(M_LN2).p_hat == doctest::Approx(1.5 * M_LN2).epsilon(1e-15));
  CHECK(p_rem(8.0 * M_LN2).p_hat == doctest::Approx(4.0 * M_LN2).epsilon(1e-15));
  CHECK(p_rem(0.0).p_hat == doctest::Approx(M_LN2));
  CHECK(p_rem(M_LN2).regime == RemPoint::Regime::high_temp);
  CHECK(p_rem(3.0).regime == RemPoint::Regime::low_temp);
  CHECK_THROWS_AS(p_rem(-1.0), InvalidTemperature);
}

TEST_CASE("legendre transform closed form and maximizer structure") {
  const RemLegendre m1 = gamma_rem(1.0);
  CHECK(m1.value == doctest::Approx(M_LN2).epsilon(1e-15));
  CHECK(m1.maximizer_lo == 0.0);
  CHECK(m1.maximizer_hi == doctest::Approx(2.0 * M_LN2));

  const RemLegendre half = gamma_rem(0.5);
  CHECK(half.value == doctest::Approx(2.0 * M_LN2).epsilon(1e-15));
  CHECK(half.maximizer_lo == doctest::Approx(8.0 * M_LN2));

  CHECK(gamma_rem(0.25).value == doctest::Approx(4.0 * M_LN2).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_rem(0.0), InvalidParameter);
  CHECK_THROWS_AS(gamma_rem(1.5), InvalidParameter);
}

TEST_CASE("variational infimum equals the closed form") {
  const RemInf low = rem_variational_inf(8.0 * M_LN2);
  CHECK(low.argmin_m == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(low.value == doctest::Approx(4.0 * M_LN2).epsilon(1e-14));

  const RemInf high = rem_variational_inf(M_LN2);
  CHECK(high.argmin_m == 1.0);
  CHECK(high.value == doctest::Approx(1.5 * M_LN2).epsilon(1e-15));

  CHECK(rem_variational_inf(2.0 * M_LN2).argmin_m == doctest::Approx(1.0));

  for (double gamma = 0.1; gamma < 10.0; gamma += 0.37)
    CHECK(rem_variational_inf(gamma).value ==
          doctest::Approx(p_rem(gamma).p_hat).epsilon(1e-13));
}

TEST_CASE("legendre round trip over an m-grid") {
  for (int i = 1; i <= 20; ++i) {
    const double m = 0.05 * i;
    const RemLegendre lg = gamma_rem(m);
    const double sup = p_rem(lg.maximizer_hi).p_hat - 0.5 * lg.maximizer_hi * m;
    CHECK(sup == doctest::Approx(M_LN2 / m).epsilon(1e-12));
  }
}

TEST_CASE("p_rem concave on any gamma grid") {
  std::vector<double> vals;
  for (int i = 0; i <= 60; ++i) vals.push_back(p_rem(0.05 + 0.12 * i).p_hat);
  for (std::size_t i = 1; i + 1 < vals.size(); ++i)
    CHECK(vals[i - 1] - 2.0 * vals[i] + vals[i + 1] <= 1e-12);
}

TEST_CASE("finite-N Monte Carlo") {
  SUBCASE("gamma = 0 is exact with zero spread") {
    const RemMcResult res = rem_finite_n_mc(16, 16, 0.0, 42);
    CHECK(res.estimate == doctest::Approx(M_LN2).epsilon(1e-13));
    CHECK(res.std_error <= 1e-12);
  }

  SUBCASE("guards") {
    CHECK_THROWS_AS(rem_finite_n_mc(25, 16, 1.0, 1), ResourceLimit);
    CHECK_THROWS_AS(rem_finite_n_mc(16, 8, 1.0, 1), InvalidParameter);
  }

  SUBCASE("determinism") {
    const RemMcResult a = rem_finite_n_mc(12, 24, M_LN2, 7);
    const RemMcResult b = rem_finite_n_mc(12, 24, M_LN2, 7);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    const RemMcResult c = rem_finite_n_mc(12, 24, M_LN2, 8);
    CHECK(a.estimate != c.estimate);
  }

  SUBCASE("N = 18 at gamma = log 2 sits near the closed form") {
    const RemMcResult res = rem_finite_n_mc(18, 48, M_LN2, 2024);
    // finite-size bias is O(log N / N); stay within 3 percent
    CHECK(std::fabs(res.estimate - 1.5 * M_LN2) / (1.5 * M_LN2) < 0.03);
    CHECK(std::fabs(res.estimate - 1.5 * M_LN2) < 5.0 * res.std_error + 0.03);
  }

  SUBCASE("bias shrinks with N within noise") {
    const double target = p_rem(M_LN2).p_hat;
    const RemMcResult n12 = rem_finite_n_mc(12, 32, M_LN2, 5);
    const RemMcResult n16 = rem_finite_n_mc(16, 32, M_LN2, 5);
    const RemMcResult n20 = rem_finite_n_mc(20, 32, M_LN2, 5);
    const double e12 = std::fabs(n12.estimate - target);
    const double e16 = std::fabs(n16.estimate - target);
    const double e20 = std::fabs(n20.estimate - target);
    const double noise = 3.0 * (n12.std_error + n16.std_error + n20.std_error);
    CHECK(e16 <= e12 + noise);
    CHECK(e20 <= e16 + noise);
  }
}
