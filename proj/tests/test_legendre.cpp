#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parisi/errors.hpp"
#include "parisi/legendre.hpp"

using namespace parisi;

TEST_CASE("gamma_hat of alpha==1 is flat at log 2") {
  const Mixture sk = Mixture::sk();
  const LegendreResult lr = gamma_hat(sk, OrderParameter::replica_symmetric());
  CHECK(lr.kind == LegendreResult::Kind::flat);
  CHECK(lr.value == doctest::Approx(M_LN2).epsilon(1e-9));
  CHECK(std::fabs(lr.slope_at_argmax) <= 1e-9);
}

TEST_CASE("gamma_hat diverges for the Dirac mass at 1") {
  const Mixture sk = Mixture::sk();
  const LegendreResult lr = gamma_hat(sk, OrderParameter::dirac_at_one());
  CHECK(lr.kind == LegendreResult::Kind::divergent);
  CHECK(std::isinf(lr.value));
  CHECK(lr.slope_at_argmax > 0.0);
}

TEST_CASE("interior argmax satisfies the first-order condition to 1e-7") {
  const Mixture sk = Mixture::sk();
  for (const OrderParameter& op :
       {OrderParameter(2, {0.3, 0.7}, {0.4}), OrderParameter(1, {0.5}, {}),
        OrderParameter(3, {0.2, 0.5, 0.8}, {0.3, 0.6})}) {
    const LegendreResult lr = gamma_hat(sk, op);
    REQUIRE(lr.kind == LegendreResult::Kind::finite);
    CHECK(std::fabs(lr.slope_at_argmax) <= 1e-7);
    CHECK(lr.value < 10.0);
  }
}

TEST_CASE("Fenchel inequality holds across a panel") {
  const Mixture sk = Mixture::sk();
  MinimizeOptions opts;
  const double gamma = 0.64;
  const ParisiMeasure pm = minimize(sk, gamma, 2, opts);
  for (int i = 1; i <= 6; ++i) {
    const OrderParameter probe = OrderParameter::single_atom(i / 7.0);
    const double c = alpha_moments(probe, sk).int_alpha_xi_prime;
    const LegendreResult g = gamma_hat(sk, probe);
    CHECK(g.value + 0.5 * gamma * c >= pm.value - 1e-8);
  }
}

TEST_CASE("forward duality at SK gamma = 0.64") {
  const Mixture sk = Mixture::sk();
  const ForwardDualityReport rep = duality_forward(sk, 0.64, 2, 1e-4);
  CHECK(rep.pass);
  CHECK(rep.residual <= 1e-6);
  CHECK(rep.p_hat_min == doctest::Approx(M_LN2 + 0.16).epsilon(1e-6));
  CHECK(rep.gamma_hat_value == doctest::Approx(M_LN2).epsilon(1e-5));
  for (const auto& chk : rep.panel) CHECK(chk.pass);
}

TEST_CASE("inverse duality: flat maximizer set for the RS measure") {
  const Mixture sk = Mixture::sk();
  MinimizeOptions opts;
  PhatCurve curve(sk, 2, opts);
  const ParisiMeasure pm = minimize(sk, 0.64, 2, opts);
  const InverseDualityReport rep = duality_inverse(curve, pm.op, 0.64, 1e-4);
  CHECK(rep.pass);
  CHECK(rep.sup_value == doctest::Approx(M_LN2).epsilon(1e-4));
}

TEST_CASE("feeding alpha==1 with claimed gamma = 4 is rejected by the value gap") {
  const Mixture sk = Mixture::sk();
  PhatCurve curve(sk, 2);
  CHECK_THROWS_AS(duality_inverse(curve, OrderParameter::replica_symmetric(), 4.0, 1e-4),
                  NotAParisiMeasure);
}

TEST_CASE("L-hat: divergence flag and the RS value") {
  const Mixture sk = Mixture::sk();
  PhatCurve curve(sk, 2);

  const LhatResult inf_case = l_hat(curve, OrderParameter::dirac_at_one(), 1.0);
  CHECK(inf_case.infinite);

  // L-hat(alpha==1) = sup (P_hat(gamma) - gamma/4) = log 2 (flat up to 1).
  const LhatResult rs = l_hat(curve, OrderParameter::replica_symmetric(), 0.8);
  CHECK(!rs.infinite);
  CHECK(rs.value == doctest::Approx(M_LN2).epsilon(1e-4));
}

TEST_CASE("two distinct matching-coupling witnesses reach the duality inf") {
  const Mixture sk = Mixture::sk();
  PhatCurve curve(sk, 2);
  const NonUniquenessDemo demo = demo_lhat_non_uniqueness(curve, 4.0, 1e-4);
  CHECK(demo.pass);
  CHECK(!(demo.alpha0 == demo.alpha1));
  CHECK(alpha_moments(demo.alpha0, sk).int_alpha_xi_prime ==
        doctest::Approx(demo.target_coupling).epsilon(1e-10));
  CHECK(alpha_moments(demo.alpha1, sk).int_alpha_xi_prime ==
        doctest::Approx(demo.target_coupling).epsilon(1e-10));
  CHECK(demo.residual0 <= 1e-4);
  CHECK(demo.residual1 <= 1e-4);
}

TEST_CASE("concavity certificate in gamma; convexity contrast in beta") {
  const Mixture sk = Mixture::sk();

  SUBCASE("SK alpha==1: linear in gamma, strictly convex in beta") {
    std::vector<double> gammas, betas;
    for (int i = 0; i < 15; ++i) {
      gammas.push_back(0.2 + 0.3 * i);
      betas.push_back(0.3 + 0.1 * i);
    }
    const double cert = concavity_certificate(sk, OrderParameter::replica_symmetric(), gammas);
    CHECK(cert <= 1e-8);
    CHECK(std::fabs(cert) <= 1e-8);  // exactly linear up to solver noise
    const double bcert =
        beta_convexity_certificate(sk, OrderParameter::replica_symmetric(), betas);
    CHECK(bcert >= -1e-10);
    CHECK(bcert > 1e-6);  // strictly convex in beta
  }

  SUBCASE("random mixed model with a 2-step alpha") {
    const Mixture mix = Mixture::from_squared({0.3, 0.12, 0.04});
    const OrderParameter op(2, {0.35, 0.75}, {0.45});
    std::vector<double> gammas;
    for (int i = 0; i < 20; ++i) gammas.push_back(0.15 + 0.22 * i);
    CHECK(concavity_certificate(mix, op, gammas) <= 1e-8);
  }
}

TEST_CASE("Gamma-hat convex along linear alpha paths") {
  const Mixture sk = Mixture::sk();
  const OrderParameter a(1, {0.3}, {});
  const OrderParameter b(2, {0.5, 0.8}, {0.5});
  std::vector<double> vals;
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    vals.push_back(gamma_hat(sk, blend(a, b, t)).value);
  }
  for (std::size_t i = 1; i + 1 < vals.size(); ++i)
    CHECK(vals[i] <= (vals[i - 1] + vals[i + 1]) / 2.0 + 1e-7);
}
