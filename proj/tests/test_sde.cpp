#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parisi/errors.hpp"
#include "parisi/oracles.hpp"
#include "parisi/sde.hpp"

using namespace parisi;

namespace {

LevelSolution sk_instance(double gamma) {
  return solve_cascade(Mixture::sk(), OrderParameter(2, {0.3, 0.7}, {0.4}), gamma);
}

}  // namespace

TEST_CASE("guards") {
  const LevelSolution sol = sk_instance(1.0);
  SimulateOptions so;
  so.n_steps = 100;
  CHECK_THROWS_AS(simulate(sol, so), InvalidParameter);
  so.n_steps = 300;
  so.control = ControlKind::custom;
  CHECK_THROWS_AS(simulate(sol, so), InvalidParameter);
}

TEST_CASE("gamma = 0: paths frozen, identities exactly zero") {
  const LevelSolution sol = solve_cascade(Mixture::sk(), OrderParameter(2, {0.3, 0.7}, {0.4}), 0.0);
  SimulateOptions so;
  so.n_paths = 50;
  so.n_steps = 250;
  const PathBatch batch = simulate(sol, so);
  for (int p = 0; p < so.n_paths; ++p) CHECK(batch.x_final[p] == 0.0);
  const MartingaleReport rep = martingale_check(batch, sol);
  CHECK(rep.ito_gap.mean == 0.0);
  for (const auto& cp : rep.checkpoints) {
    CHECK(cp.u_mean.mean == 0.0);
    CHECK(cp.u_sq.mean == 0.0);
  }
}

TEST_CASE("zero control: X(1) ~ N(0, gamma xi'(1)) and the quadrature objective") {
  const double gamma = 1.0;
  const LevelSolution sol = sk_instance(gamma);
  SimulateOptions so;
  so.n_paths = 40000;
  so.n_steps = 400;
  so.control = ControlKind::zero;
  so.seed = 99;
  const PathBatch batch = simulate(sol, so);

  const MeanSe xmean = mean_se(batch.x_final);
  CHECK(std::fabs(xmean.mean) <= 4.0 * xmean.se);
  const MeanSe xsq = mean_se(batch.x_final.square());
  const double var_target = gamma * Mixture::sk().xi_prime(1.0);
  CHECK(std::fabs(xsq.mean - var_target) <= 4.0 * xsq.se);

  // objective = E log cosh(N(0, gamma xi'(1))), below Phi(0,0)
  const MeanSe obj = variational_objective(batch);
  const double quad = oracle::gauss_expect(
      [](double z) { return std::log(std::cosh(z)); }, var_target);
  CHECK(std::fabs(obj.mean - quad) <= 4.0 * obj.se);
  CHECK(obj.mean <= sol.phi00() + 3.0 * obj.se);
}

TEST_CASE("optimal control reproduces Phi(0,0) within 3 SE; zero control stays below") {
  const LevelSolution sol = sk_instance(2.0);
  SimulateOptions so;
  so.n_paths = 60000;
  so.n_steps = 600;
  so.seed = 12345;
  const PathBatch opt = simulate(sol, so);
  const MeanSe obj = variational_objective(opt);
  CHECK(std::fabs(obj.mean - sol.phi00()) <= 3.0 * obj.se);

  so.control = ControlKind::zero;
  const PathBatch zero = simulate(sol, so);
  const MeanSe zobj = variational_objective(zero);
  CHECK(obj.mean - zobj.mean > 3.0 * std::hypot(obj.se, zobj.se));
}

TEST_CASE("custom admissible control stays below the optimum") {
  const LevelSolution sol = sk_instance(2.0);
  SimulateOptions so;
  so.n_paths = 30000;
  so.n_steps = 400;
  so.seed = 777;
  so.control = ControlKind::custom;
  so.custom_control = [](double, double x) { return std::tanh(0.5 * x); };
  const PathBatch batch = simulate(sol, so);
  const MeanSe obj = variational_objective(batch);
  CHECK(obj.mean <= sol.phi00() + 3.0 * obj.se);
}

TEST_CASE("martingale identities under the optimal control") {
  const LevelSolution sol = sk_instance(2.0);
  SimulateOptions so;
  so.n_paths = 60000;
  so.n_steps = 1000;
  so.seed = 31415;
  const PathBatch batch = simulate(sol, so);
  const MartingaleReport rep = martingale_check(batch, sol);
  for (const auto& cp : rep.checkpoints) {
    CHECK(cp.u_mean_ok);
    CHECK(cp.u_sq_ok);
  }
  CHECK(rep.ito_ok);
  CHECK(rep.pass);
}

TEST_CASE("standard error scales like 1/sqrt(paths)") {
  const LevelSolution sol = sk_instance(1.0);
  SimulateOptions so;
  so.n_steps = 300;
  so.seed = 8;
  so.n_paths = 4000;
  const MeanSe small = variational_objective(simulate(sol, so));
  so.n_paths = 16000;
  const MeanSe large = variational_objective(simulate(sol, so));
  CHECK(large.se == doctest::Approx(small.se / 2.0).epsilon(0.25));
}

TEST_CASE("halving the step changes the optimal objective by less than 1 SE") {
  const LevelSolution sol = sk_instance(2.0);
  SimulateOptions so;
  so.n_paths = 50000;
  so.seed = 4242;
  so.n_steps = 500;
  const MeanSe coarse = variational_objective(simulate(sol, so));
  so.n_steps = 1000;
  const MeanSe fine = variational_objective(simulate(sol, so));
  CHECK(std::fabs(coarse.mean - fine.mean) <= std::max(coarse.se, fine.se));
}

TEST_CASE("determinism across runs and thread counts") {
  const LevelSolution sol = sk_instance(1.5);
  SimulateOptions so;
  so.n_paths = 2000;
  so.n_steps = 250;
  so.seed = 11;
  so.threads = 1;
  const PathBatch a = simulate(sol, so);
  so.threads = 4;
  const PathBatch b = simulate(sol, so);
  CHECK(variational_objective(a).mean == variational_objective(b).mean);
  for (int p = 0; p < so.n_paths; ++p) CHECK(a.x_final[p] == b.x_final[p]);
}

TEST_CASE("trajectory recording is bounded") {
  const LevelSolution sol = sk_instance(1.0);
  SimulateOptions so;
  so.record_trajectories = true;
  so.n_paths = 5000;
  CHECK_THROWS_AS(simulate(sol, so), InvalidParameter);
  so.n_paths = 8;
  so.n_steps = 250;
  const PathBatch batch = simulate(sol, so);
  CHECK(batch.trajectories_x.size() == 8);
  CHECK(batch.trajectories_x[0].size() >= 250);
}
